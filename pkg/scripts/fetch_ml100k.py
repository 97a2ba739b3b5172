#!/usr/bin/env python3
"""Download and unpack the MovieLens 100K dataset into data/ml-100k/.

The benchmark and acceptance tests look for the canonical files (u.data,
u1.base/u1.test ... u5, ua, ub) in that directory, or wherever
CFKIT_ML100K_DIR points. The dataset license does not allow
redistribution, so it is never committed to this repository.
"""

import io
import sys
import urllib.request
import zipfile
from pathlib import Path

URL = "https://files.grouplens.org/datasets/movielens/ml-100k.zip"
WANTED = ["u.data"] + [f"u{n}.{kind}" for n in "12345ab" for kind in ("base", "test")]


def main():
    target = Path(__file__).resolve().parent.parent / "data" / "ml-100k"
    if len(sys.argv) > 1:
        target = Path(sys.argv[1])
    target.mkdir(parents=True, exist_ok=True)
    print(f"downloading {URL} ...")
    with urllib.request.urlopen(URL) as resp:
        blob = resp.read()
    with zipfile.ZipFile(io.BytesIO(blob)) as zf:
        for name in WANTED + ["README"]:
            data = zf.read(f"ml-100k/{name}")
            (target / name).write_bytes(data)
            print(f"  wrote {target / name}")
    lines = (target / "u.data").read_text().count("\n")
    if lines != 100000:
        print(f"warning: expected 100000 ratings, found {lines}", file=sys.stderr)
        return 1
    print("done")
    return 0


if __name__ == "__main__":
    sys.exit(main())

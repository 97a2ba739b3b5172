import os
from pathlib import Path

import pytest

from cfkit import RatingTriple, build_store

# tiny worked example used across modules:
#   u1: a=5 b=3 c=4 / u2: a=4 b=3 / u3: b=1 c=2
M0_TRIPLES = [
    RatingTriple("u1", "a", 5.0),
    RatingTriple("u1", "b", 3.0),
    RatingTriple("u1", "c", 4.0),
    RatingTriple("u2", "a", 4.0),
    RatingTriple("u2", "b", 3.0),
    RatingTriple("u3", "b", 1.0),
    RatingTriple("u3", "c", 2.0),
]


@pytest.fixture
def m0_store():
    return build_store(M0_TRIPLES)


def ml100k_path():
    root = os.environ.get("CFKIT_ML100K_DIR")
    if root:
        return Path(root)
    return Path(__file__).resolve().parent.parent / "data" / "ml-100k"


@pytest.fixture(scope="session")
def ml100k_dir():
    path = ml100k_path()
    if not (path / "u.data").exists():
        pytest.skip(
            "MovieLens 100K not found: run scripts/fetch_ml100k.py or set CFKIT_ML100K_DIR"
        )
    return path

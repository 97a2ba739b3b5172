"""Reading delimited rating files and writing prediction/recommendation output.

Input files are plain delimited text (csv, tsv, ...) where the caller says
which columns hold the user, item and rating; any extra columns (e.g.
timestamps) are ignored. Output goes to txt or json with fixed schemas.
"""

import json
import math
from dataclasses import dataclass

from .errors import MalformedLineError, RatingValueError
from .store import RatingTriple

PREDICTION_DECIMALS = 6


@dataclass(frozen=True)
class DataFileSpec:
    """Layout of a delimited rating file."""

    delimiter: str = "\t"
    has_header: bool = False
    user_col: int = 0
    item_col: int = 1
    rating_col: int = 2

    def __post_init__(self):
        if len(self.delimiter) != 1:
            raise ValueError("delimiter must be a single character")
        cols = (self.user_col, self.item_col, self.rating_col)
        if len(set(cols)) != 3:
            raise ValueError("user_col, item_col and rating_col must be distinct")
        if min(cols) < 0:
            raise ValueError("column indices must be non-negative")

    @property
    def max_col(self):
        return max(self.user_col, self.item_col, self.rating_col)


@dataclass(frozen=True)
class PredictionRecord:
    user: str
    item: str
    predicted: float
    actual: float = None


@dataclass(frozen=True)
class RecommendationList:
    user: str
    items: tuple

    def __post_init__(self):
        if len(set(self.items)) != len(self.items):
            raise ValueError("recommendation list contains duplicate items")


def parse_ratings(path, spec=DataFileSpec()):
    """Parse a rating file into a list of RatingTriple, preserving line order.

    Blank lines are skipped silently; when ``spec.has_header`` is set exactly
    the first line is dropped. A short line or an unparsable rating raises
    with the offending 1-based line number.
    """
    triples = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, 1):
            if spec.has_header and line_no == 1:
                continue
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            fields = line.split(spec.delimiter)
            if len(fields) <= spec.max_col:
                raise MalformedLineError(
                    line_no,
                    f"expected at least {spec.max_col + 1} columns, got {len(fields)}",
                )
            user = fields[spec.user_col]
            item = fields[spec.item_col]
            text = fields[spec.rating_col]
            if not user or not item:
                raise MalformedLineError(line_no, "empty user or item token")
            try:
                rating = float(text)
            except ValueError:
                raise RatingValueError(line_no, text) from None
            if not math.isfinite(rating):
                raise RatingValueError(line_no, text)
            triples.append(RatingTriple(user, item, rating))
    return triples


def write_ratings(triples, path, spec=DataFileSpec()):
    """Inverse of parse_ratings; unnamed columns are padded with '0'."""
    width = spec.max_col + 1
    with open(path, "w", encoding="utf-8") as fh:
        for t in triples:
            row = ["0"] * width
            row[spec.user_col] = t.user
            row[spec.item_col] = t.item
            row[spec.rating_col] = repr(t.rating)
            fh.write(spec.delimiter.join(row) + "\n")


def write_predictions(records, path, fmt="txt"):
    """Write PredictionRecords as tab-separated txt or a flat json array."""
    if fmt == "txt":
        with open(path, "w", encoding="utf-8") as fh:
            for r in records:
                fh.write(f"{r.user}\t{r.item}\t{r.predicted:.{PREDICTION_DECIMALS}f}\n")
    elif fmt == "json":
        parts = [
            '{"user":%s,"item":%s,"prediction":%.*f}'
            % (json.dumps(r.user), json.dumps(r.item), PREDICTION_DECIMALS, r.predicted)
            for r in records
        ]
        _write_json_array(parts, path)
    else:
        raise ValueError(f"unknown output format {fmt!r}")


def write_recommendations(lists, path, fmt="txt"):
    """Write RecommendationLists as `user<TAB>item1,item2,...` txt or json."""
    if fmt == "txt":
        with open(path, "w", encoding="utf-8") as fh:
            for rec in lists:
                fh.write(f"{rec.user}\t{','.join(rec.items)}\n")
    elif fmt == "json":
        parts = [recommendation_json(rec) for rec in lists]
        _write_json_array(parts, path)
    else:
        raise ValueError(f"unknown output format {fmt!r}")


def recommendation_json(rec):
    """Compact json object for one RecommendationList."""
    return '{"user":%s,"items":%s}' % (
        json.dumps(rec.user),
        json.dumps(list(rec.items), separators=(",", ":")),
    )


def _write_json_array(parts, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("[" + ",".join(parts) + "]")

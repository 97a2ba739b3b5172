"""Error metrics, the timed evaluation loop, and benchmark csv reports."""

import math
import time
from dataclasses import dataclass

from .dataio import PredictionRecord
from .errors import EmptyEvaluationError
from .factorization import ensure_compiled, train_funksvd

CSV_HEADER = "algorithm,factors,mae,rmse,n_test,n_fallback,train_time_ms,test_time_ms"


@dataclass
class EvalReport:
    algorithm: str
    hyperparams: dict
    mae: float
    rmse: float
    n_test: int
    n_fallback: int
    train_time_ms: int
    test_time_ms: int


def mae(pairs):
    """Mean absolute error over (actual, predicted) pairs."""
    if not pairs:
        raise EmptyEvaluationError("no pairs to evaluate")
    return sum(abs(a - p) for a, p in pairs) / len(pairs)


def rmse(pairs):
    """Root mean squared error over (actual, predicted) pairs."""
    if not pairs:
        raise EmptyEvaluationError("no pairs to evaluate")
    return math.sqrt(sum((a - p) ** 2 for a, p in pairs) / len(pairs))


def evaluate(model, test, clock=time.perf_counter, train_time_ms=0):
    """Predict every test triple and report MAE/RMSE plus timings.

    Predictions are total by the model contracts, so every pair scores;
    pairs served by the fallback chain are counted separately but included
    in the metrics. test_time_ms spans the prediction loop only.
    """
    test = list(test)
    if not test:
        raise EmptyEvaluationError("empty test sequence")
    records = []
    pairs = []
    n_fallback = 0
    t0 = clock()
    for t in test:
        value, used_fallback = model.predict_detailed(t.user, t.item)
        if used_fallback:
            n_fallback += 1
        pairs.append((t.rating, value))
        records.append(PredictionRecord(t.user, t.item, value, t.rating))
    t1 = clock()
    report = EvalReport(
        algorithm=model.kind,
        hyperparams=dict(model.hyperparams),
        mae=mae(pairs),
        rmse=rmse(pairs),
        n_test=len(test),
        n_fallback=n_fallback,
        train_time_ms=train_time_ms,
        test_time_ms=int(round((t1 - t0) * 1000)),
    )
    return report, records


def timing_sweep(train_store, test, factor_grid, config, clock=time.perf_counter):
    """Train/test once per factor count, same seed and epochs throughout."""
    grid = list(factor_grid)
    if not grid:
        raise ValueError("factor grid must be non-empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("factor grid must be strictly ascending")
    ensure_compiled()
    reports = []
    for factors in grid:
        cfg = config.with_factors(factors)
        t0 = clock()
        model = train_funksvd(train_store, cfg)
        train_ms = int(round((clock() - t0) * 1000))
        report, _ = evaluate(model, test, clock=clock, train_time_ms=train_ms)
        reports.append(report)
    return reports


def csv_row(report):
    factors = report.hyperparams.get("factors", "")
    fmt = lambda v: "" if v is None else f"{v:.6f}"
    count = lambda v: "" if v is None else str(v)
    return ",".join(
        [
            report.algorithm,
            str(factors),
            fmt(report.mae),
            fmt(report.rmse),
            count(report.n_test),
            count(report.n_fallback),
            str(report.train_time_ms),
            str(report.test_time_ms),
        ]
    )


def write_benchmark_csv(reports, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for report in reports:
            fh.write(csv_row(report) + "\n")


def append_benchmark_csv(report, path):
    """Add one row, writing the header first if the file does not exist."""
    try:
        with open(path, encoding="utf-8") as fh:
            has_header = fh.readline().strip() == CSV_HEADER
    except FileNotFoundError:
        has_header = False
    with open(path, "a", encoding="utf-8") as fh:
        if not has_header:
            fh.write(CSV_HEADER + "\n")
        fh.write(csv_row(report) + "\n")

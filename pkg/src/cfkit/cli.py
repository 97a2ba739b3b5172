"""Command-line front end: train, test, recommend and benchmark workflows.

Exit codes: 0 success, 1 runtime/data error (unreadable files, parse
failures, bad model files, divergence), 2 usage or configuration error.
"""

import argparse
import sys
import time
from pathlib import Path

from .baseline import train_means, train_popular
from .dataio import DataFileSpec, parse_ratings, recommendation_json, write_predictions
from .errors import CfkitError, ConfigError
from .evaluate import (
    EvalReport,
    append_benchmark_csv,
    evaluate,
    timing_sweep,
    write_benchmark_csv,
)
from .factorization import FactorizationConfig, ensure_compiled, train_funksvd
from .neighborhood import train_knn, train_slopeone
from .serialize import (
    KINDS_NEEDING_STORE,
    model_from_payload,
    read_model_file,
    save_model,
    train_echo,
)
from .store import build_store

ALGORITHMS = (
    "useravg",
    "itemavg",
    "mostpopular",
    "slopeone",
    "userknn",
    "itemknn",
    "funksvd",
)

DELIMITER_ALIASES = {"\\t": "\t", "tab": "\t", "comma": ",", "semicolon": ";"}


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 1")
    return value


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be > 0")
    return value


def _nonneg_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 0")
    return value


def _build_parser():
    filespec = argparse.ArgumentParser(add_help=False)
    filespec.add_argument(
        "--delimiter",
        default="\t",
        help="field delimiter for data files; '\\t' or 'tab' for tab (default)",
    )
    filespec.add_argument(
        "--header", action="store_true", help="skip the first line of data files"
    )
    filespec.add_argument("--user-col", type=int, default=0)
    filespec.add_argument("--item-col", type=int, default=1)
    filespec.add_argument("--rating-col", type=int, default=2)

    hyper = argparse.ArgumentParser(add_help=False)
    hyper.add_argument("--k", type=_positive_int, default=50, help="KNN neighborhood size")
    hyper.add_argument("--factors", type=_positive_int, default=100)
    hyper.add_argument("--max-iter", type=_positive_int, default=100)
    hyper.add_argument("--lr", type=_positive_float, default=0.01, help="SGD learning rate")
    hyper.add_argument("--reg", type=_nonneg_float, default=0.1, help="SGD regularization")
    hyper.add_argument("--seed", type=int, default=42)
    hyper.add_argument(
        "--no-biases", action="store_true", help="train factors without bias terms"
    )

    parser = argparse.ArgumentParser(
        prog="cfkit", description="Collaborative-filtering train/test/recommend/benchmark"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", parents=[filespec, hyper])
    p_train.add_argument("--algo", required=True, choices=ALGORITHMS)
    p_train.add_argument("--train", required=True, help="training ratings file")
    p_train.add_argument("--model", required=True, help="output model path")
    p_train.set_defaults(func=cmd_train)

    p_test = sub.add_parser("test", parents=[filespec])
    p_test.add_argument("--model", required=True)
    p_test.add_argument("--test", required=True, help="test ratings file")
    p_test.add_argument(
        "--train",
        help="training ratings file (defaults to the path recorded in the model)",
    )
    p_test.add_argument("--out", help="write per-pair predictions here")
    p_test.add_argument("--format", choices=("txt", "json"), default="txt")
    p_test.add_argument("--csv", help="append a benchmark csv row here")
    p_test.set_defaults(func=cmd_test)

    p_rec = sub.add_parser("recommend", parents=[filespec])
    p_rec.add_argument("--model", required=True)
    p_rec.add_argument("--user", required=True)
    p_rec.add_argument("--top-n", type=_positive_int, default=10)
    p_rec.add_argument("--include-rated", action="store_true")
    p_rec.add_argument(
        "--train",
        help="training ratings file (defaults to the path recorded in the model)",
    )
    p_rec.set_defaults(func=cmd_recommend)

    p_bench = sub.add_parser("benchmark", parents=[filespec, hyper])
    p_bench.add_argument("--train", required=True)
    p_bench.add_argument("--test", required=True)
    p_bench.add_argument("--csv", default="benchmark.csv")
    p_bench.add_argument(
        "--outdir", help="directory for the trained model files (default: <csv dir>/models)"
    )
    p_bench.add_argument(
        "--algos", help="comma-separated subset of algorithms (default: all seven)"
    )
    p_bench.add_argument(
        "--factor-grid",
        help="comma-separated ascending factor counts; adds a funksvd timing csv",
    )
    p_bench.add_argument("--timing-csv", help="path for the factor-grid timing csv")
    p_bench.add_argument("--top-n", type=_positive_int, default=10)
    p_bench.set_defaults(func=cmd_benchmark)
    return parser


def _file_spec(args):
    delim = DELIMITER_ALIASES.get(args.delimiter, args.delimiter)
    try:
        return DataFileSpec(
            delimiter=delim,
            has_header=args.header,
            user_col=args.user_col,
            item_col=args.item_col,
            rating_col=args.rating_col,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _fsvd_config(args):
    try:
        return FactorizationConfig(
            factors=args.factors,
            max_iter=args.max_iter,
            learn_rate=args.lr,
            regularization=args.reg,
            seed=args.seed,
            use_biases=not args.no_biases,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _trainer(algo, args):
    if algo == "useravg":
        return lambda store: train_means(store, "user")
    if algo == "itemavg":
        return lambda store: train_means(store, "item")
    if algo == "mostpopular":
        return train_popular
    if algo == "slopeone":
        return train_slopeone
    if algo == "userknn":
        return lambda store: train_knn(store, "user", args.k)
    if algo == "itemknn":
        return lambda store: train_knn(store, "item", args.k)
    if algo == "funksvd":
        config = _fsvd_config(args)
        return lambda store: train_funksvd(store, config)
    raise ConfigError(f"unknown algorithm {algo!r}")


def _load_training_store(args, payload):
    """Parse the training file named on the command line or in the model."""
    if args.train:
        path, spec = args.train, _file_spec(args)
    else:
        path, spec = train_echo(payload)
        if path is None:
            raise ConfigError(
                "this model needs the training ratings: pass --train "
                "(the model file records no training path)"
            )
    return build_store(parse_ratings(path, spec))


def cmd_train(args):
    spec = _file_spec(args)
    trainer = _trainer(args.algo, args)
    store = build_store(parse_ratings(args.train, spec))
    if args.algo == "funksvd":
        ensure_compiled()
    t0 = time.perf_counter()
    model = trainer(store)
    train_ms = int(round((time.perf_counter() - t0) * 1000))
    save_model(model, args.model, train_path=args.train, file_spec=spec)
    print(f"train_time_ms: {train_ms}")
    return 0


def cmd_test(args):
    payload = read_model_file(args.model)
    kind = payload["kind"]
    if kind == "mostpopular":
        raise ConfigError(
            "mostpopular only generates recommendations; use the recommend command"
        )
    store = None
    if kind in KINDS_NEEDING_STORE:
        store = _load_training_store(args, payload)
    model = model_from_payload(payload, store=store)
    test = parse_ratings(args.test, _file_spec(args))
    report, records = evaluate(model, test)
    print(f"MAE: {report.mae:.6f}  RMSE: {report.rmse:.6f}")
    if args.out:
        write_predictions(records, args.out, args.format)
    if args.csv:
        append_benchmark_csv(report, args.csv)
    return 0


def cmd_recommend(args):
    payload = read_model_file(args.model)
    store = _load_training_store(args, payload)
    model = model_from_payload(payload, store=store)
    if payload["kind"] == "mostpopular":
        rec = model.recommend(args.user, args.top_n, args.include_rated)
    else:
        rec = model.recommend(store, args.user, args.top_n, args.include_rated)
    print(recommendation_json(rec))
    return 0


def cmd_benchmark(args):
    spec = _file_spec(args)
    algos = ALGORITHMS if not args.algos else tuple(args.algos.split(","))
    for algo in algos:
        if algo not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {algo!r}")
    store = build_store(parse_ratings(args.train, spec))
    test = parse_ratings(args.test, spec)
    outdir = Path(args.outdir) if args.outdir else Path(args.csv).parent / "models"
    outdir.mkdir(parents=True, exist_ok=True)

    reports = []
    for algo in algos:
        trainer = _trainer(algo, args)
        if algo == "funksvd":
            ensure_compiled()
        t0 = time.perf_counter()
        model = trainer(store)
        train_ms = int(round((time.perf_counter() - t0) * 1000))
        model_path = outdir / f"{algo}.model.json"
        save_model(model, model_path, train_path=args.train, file_spec=spec)
        # models are always persisted, then reloaded, so the test phase
        # times exactly what a separate test run would see
        payload = read_model_file(model_path)
        loaded = model_from_payload(
            payload, store=store if algo in KINDS_NEEDING_STORE else None
        )
        if algo == "mostpopular":
            report = _popularity_report(loaded, test, args.top_n, train_ms)
            print(f"{algo}: recommended top-{args.top_n} for {report.n_test} users")
        else:
            report, _ = evaluate(loaded, test, train_time_ms=train_ms)
            print(f"{algo}: MAE: {report.mae:.6f}  RMSE: {report.rmse:.6f}")
        reports.append(report)
    write_benchmark_csv(reports, args.csv)
    print(f"benchmark csv: {args.csv}")

    if args.factor_grid:
        try:
            grid = [int(x) for x in args.factor_grid.split(",")]
        except ValueError:
            raise ConfigError(f"bad factor grid {args.factor_grid!r}") from None
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 1:
            raise ConfigError("factor grid must be strictly ascending positive integers")
        timing_path = args.timing_csv or str(Path(args.csv).with_suffix("")) + "_timing.csv"
        sweep = timing_sweep(store, test, grid, _fsvd_config(args))
        write_benchmark_csv(sweep, timing_path)
        print(f"timing csv: {timing_path}")
    return 0


def _popularity_report(model, test, top_n, train_ms):
    """Most Popular has no rating predictor, so its test phase times the
    generation of one recommendation list per distinct test user."""
    seen = dict.fromkeys(t.user for t in test)
    users = list(seen)
    t0 = time.perf_counter()
    for user in users:
        model.recommend(user, top_n, False)
    test_ms = int(round((time.perf_counter() - t0) * 1000))
    return EvalReport(
        algorithm="mostpopular",
        hyperparams={},
        mae=None,
        rmse=None,
        n_test=len(users),
        n_fallback=None,
        train_time_ms=train_ms,
        test_time_ms=test_ms,
    )


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CfkitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``train``, ``evaluate``, ``forecast`` and ``compare``.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from datetime import date
from pathlib import Path

import numpy as np

from . import metrics, pipeline
from .dataset import load_series
from .errors import InvalidArgumentError, IsaclError
from .pipeline import ALGORITHMS, RunConfig

log = logging.getLogger("isacl_mfnn")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _bounds(text: str) -> tuple[float, float]:
    try:
        low, high = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LOW,HIGH, got {text!r}") from None
    if not low < high:
        raise argparse.ArgumentTypeError("bounds need LOW < HIGH")
    return low, high


def _iso_date(text: str) -> str:
    try:
        return date.fromisoformat(text).isoformat()
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}") from None


def _algorithms(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    bad = [n for n in names if n not in ALGORITHMS]
    if not names or bad:
        raise argparse.ArgumentTypeError(f"unknown algorithm(s) {bad}; choose from {', '.join(ALGORITHMS)}")
    return names


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, type=Path, help="CSV with date,cumulative_cases")
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--pop", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--split-date", type=_iso_date, default=None,
                       help=f"last training day (default {pipeline.DEFAULT_SPLIT_DATE})")
    group.add_argument("--split-ratio", type=float, default=None)
    p.add_argument("--horizon", type=int, default=12)
    p.add_argument("--hidden1", type=int, default=10)
    p.add_argument("--hidden2", type=int, default=10)
    p.add_argument("--bounds", type=_bounds, default=(-10.0, 10.0), metavar="LOW,HIGH")
    p.add_argument("--mape-denominator", choices=("model", "actual"), default="model")
    p.add_argument("--lr", type=float, default=0.5, help="learning rate for MFNN-BP")
    p.add_argument("--epochs", type=int, default=None, help="MFNN-BP epochs (default iters*pop)")
    p.add_argument("--out-dir", type=Path, default=Path("."))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isacl-mfnn", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one network and write model.txt + trace.csv")
    _add_run_options(p)
    p.add_argument("--algo", choices=ALGORITHMS, default="ISACL")

    p = sub.add_parser("evaluate", help="train/test error indices for a saved model")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--data", required=True, type=Path)
    p.add_argument("--out-dir", type=Path, default=None)

    p = sub.add_parser("forecast", help="forecast the days after the series end")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--horizon", type=int, default=None, help="days (default: the model's horizon)")
    p.add_argument("--out-dir", type=Path, default=Path("."))

    p = sub.add_parser("compare", help="run an algorithm x seed grid")
    _add_run_options(p)
    p.add_argument("--algo", type=_algorithms, default=list(ALGORITHMS),
                   help="comma-separated algorithm list (default: all)")
    p.add_argument("--seeds", type=int, default=5, help="number of seeds, starting at --seed")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    return parser


def config_from_args(args, algorithm: str) -> RunConfig:
    split_date = args.split_date
    if args.split_ratio is None and split_date is None:
        split_date = pipeline.DEFAULT_SPLIT_DATE
    return RunConfig(
        algorithm=algorithm, iters=args.iters, pop_size=args.pop, seed=args.seed,
        hidden1=args.hidden1, hidden2=args.hidden2, bounds=tuple(args.bounds),
        split_date=split_date if args.split_ratio is None else None,
        split_ratio=args.split_ratio, horizon_days=args.horizon,
        mape_denominator=args.mape_denominator, learning_rate=args.lr, epochs=args.epochs,
    )


def _require_file(path: Path, what: str) -> None:
    if not path.is_file():
        raise UsageError(f"{what} not found: {path}")


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_trace(path: Path, trace) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["iteration", "best_mse"])
        for k, v in enumerate(trace, start=1):
            w.writerow([k, repr(float(v))])


def write_metrics(path: Path, reports: dict[str, metrics.MetricsReport]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["split", *metrics.FIELDS])
        for split_name, rep in reports.items():
            f = rep.formatted()
            w.writerow([split_name, *(f[k] for k in metrics.FIELDS)])


def format_report(reports: dict[str, metrics.MetricsReport]) -> str:
    lines = [f"{'split':<6} " + " ".join(f"{k:>12}" for k in metrics.FIELDS)]
    for split_name, rep in reports.items():
        f = rep.formatted()
        lines.append(f"{split_name:<6} " + " ".join(f"{f[k]:>12}" for k in metrics.FIELDS))
    return "\n".join(lines)


# --- subcommands -------------------------------------------------------------


def cmd_train(args) -> int:
    _require_file(args.data, "data file")
    cfg = config_from_args(args, args.algo)
    ds = load_series(args.data)
    result = pipeline.train(ds, cfg)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    pipeline.save_model(result.model, args.out_dir / "model.txt")
    write_trace(args.out_dir / "trace.csv", result.best_per_iter)
    print(f"{cfg.algorithm} seed={cfg.seed}: train mse={result.model.train_mse:.6g} "
          f"({result.eval_count} evaluations) -> {args.out_dir}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    _require_file(args.model, "model file")
    _require_file(args.data, "data file")
    model = pipeline.load_model(args.model)
    reports = pipeline.evaluate(model, load_series(args.data))
    print(format_report(reports))
    out_dir = args.out_dir if args.out_dir is not None else args.model.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    write_metrics(out_dir / "metrics.csv", reports)
    return EXIT_OK


def cmd_forecast(args) -> int:
    _require_file(args.model, "model file")
    model = pipeline.load_model(args.model)
    horizon = model.config.horizon_days if args.horizon is None else args.horizon
    rows = pipeline.forecast(model, horizon)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    path = args.out_dir / "forecast.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["date", "forecast"])
        for d, v in rows:
            w.writerow([d.isoformat(), f"{v:.6f}"])
    for d, v in rows:
        print(f"{d.isoformat()}  {v:14.1f}")
    return EXIT_OK


def run_cell(ds, cfg: RunConfig) -> dict:
    """Train and score one (algorithm, seed) cell; failures are returned, not raised."""
    cell = {"algorithm": cfg.algorithm, "seed": cfg.seed, "status": "ok"}
    try:
        result = pipeline.train(ds, cfg)
        reports = pipeline.evaluate(result.model, ds)
        days = np.arange(1, len(ds) + cfg.horizon_days + 1)
        cell.update(final_mse=result.model.train_mse, trace=result.best_per_iter,
                    metrics=reports, prediction=result.model.predict_days(days))
    except (IsaclError, ArithmeticError, ValueError) as exc:
        cell["status"] = f"failed: {exc}"
    return cell


def _median_report(reports: list[metrics.MetricsReport]) -> metrics.MetricsReport:
    return metrics.MetricsReport(**{k: float(np.median([getattr(r, k) for r in reports]))
                                    for k in metrics.FIELDS})


def cmd_compare(args) -> int:
    _require_file(args.data, "data file")
    if args.seeds < 1:
        raise UsageError("--seeds must be >= 1")
    ds = load_series(args.data)
    base = config_from_args(args, args.algo[0])
    configs = [replace(base, algorithm=a, seed=args.seed + s)
               for a in args.algo for s in range(args.seeds)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            cells = list(pool.map(run_cell, [ds] * len(configs), configs))
    else:
        cells = [run_cell(ds, c) for c in configs]

    out = args.out_dir
    (out / "traces").mkdir(parents=True, exist_ok=True)
    for cell in cells:
        if cell["status"] == "ok":
            write_trace(out / "traces" / f"{cell['algorithm']}_seed{cell['seed']}.csv", cell["trace"])

    with (out / "compare_runs.csv").open("w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["algorithm", "seed", "status", "final_mse",
                    *(f"train_{k}" for k in metrics.FIELDS), *(f"test_{k}" for k in metrics.FIELDS)])
        for cell in cells:
            if cell["status"] != "ok":
                w.writerow([cell["algorithm"], cell["seed"], cell["status"]] + [""] * 11)
                continue
            tr, te = cell["metrics"]["train"].formatted(), cell["metrics"]["test"].formatted()
            w.writerow([cell["algorithm"], cell["seed"], "ok", metrics.format_sig(cell["final_mse"]),
                        *(tr[k] for k in metrics.FIELDS), *(te[k] for k in metrics.FIELDS)])

    best_cells = {}
    with (out / "compare_summary.csv").open("w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["algorithm", "statistic", "seed", "runs_ok", "runs_failed", "split", *metrics.FIELDS])
        for algo in args.algo:
            mine = [c for c in cells if c["algorithm"] == algo]
            ok = [c for c in mine if c["status"] == "ok"]
            n_failed = len(mine) - len(ok)
            if not ok:
                w.writerow([algo, "none", "", 0, n_failed, "", *[""] * len(metrics.FIELDS)])
                continue
            best = min(ok, key=lambda c: (c["final_mse"], c["seed"]))
            best_cells[algo] = best
            for split_name in ("train", "test"):
                rows = [("best", best["seed"], best["metrics"][split_name]),
                        ("median", "", _median_report([c["metrics"][split_name] for c in ok]))]
                for stat, seed, rep in rows:
                    f = rep.formatted()
                    w.writerow([algo, stat, seed, len(ok), n_failed, split_name,
                                *(f[k] for k in metrics.FIELDS)])

    n_days = len(ds) + base.horizon_days
    with (out / "plot_data.csv").open("w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        algos = list(best_cells)
        w.writerow(["day_index", "actual", *algos])
        for i in range(n_days):
            actual = repr(float(ds.cumulative[i])) if i < len(ds) else ""
            w.writerow([i + 1, actual, *(f"{best_cells[a]['prediction'][i]:.6f}" for a in algos)])

    for algo, best in best_cells.items():
        te = best["metrics"]["test"].formatted()
        tr = best["metrics"]["train"].formatted()
        print(f"{algo:<8} best seed {best['seed']:>3}: train r2={tr['r2']} rmse={tr['rmse']}  "
              f"test mape={te['mape']}")
    failed = sum(c["status"] != "ok" for c in cells)
    if failed:
        print(f"{failed} of {len(cells)} runs failed; see compare_runs.csv", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"train": cmd_train, "evaluate": cmd_evaluate, "forecast": cmd_forecast,
            "compare": cmd_compare}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except InvalidArgumentError as exc:
        print(f"isacl-mfnn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IsaclError, OSError, ValueError) as exc:
        print(f"isacl-mfnn: error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

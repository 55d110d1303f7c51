"""Command-line front end.

Exit codes: 0 success, 2 bad arguments or failed validation, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from .asymptotics import (
    AssumptionError,
    mezard_parisi_expansion,
    parisi_sum,
    predict,
)
from .distributions import DistributionError, DistributionSpec, exponential, uniform01
from .greedy import greedy_assign, row_max_sum
from .montecarlo import ConfigError, ExperimentConfig, Statistic, run
from .solver import MatrixError, Sense, read_matrix_csv, solve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3

WORKERS_ENV = "ASSIGNMAX_WORKERS"
PARISI_N_MAX = 64
PRE_ASYMPTOTIC_N = 10

SIMULATE_FIELDS = ["n", "stat", "mean", "stddev", "stderr", "ci95_low", "ci95_high",
                   "reps", "seed"]
PREDICT_FIELDS = ["dist", "n", "g_of_inv_n", "em_n_predicted", "em_assignment_predicted",
                  "exact_em_n", "notes"]
TABLE_FIELDS = ["dist", "n", "g_of_inv_n", "predicted", "mc_mean", "mc_stderr", "ratio",
                "notes"]
PARISI_FIELDS = ["dist", "n", "stat", "mc_mean", "mc_stderr", "target", "target_kind",
                 "z", "flag"]
SOLVE_FIELDS = ["n", "sense", "value", "permutation", "greedy_total", "row_max_sum"]

TABLE_DISTS = ["normal", "exp:1", "gumbel:0:1", "laplace:0:1", "poisson:4"]


class _UsageError(Exception):
    pass


class _IOFailure(Exception):
    pass


def format_value(x):
    """Render one cell: floats to 12 significant digits, None as empty."""
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _json_value(x):
    if isinstance(x, float):
        return float(format(x, ".12g")) if math.isfinite(x) else None
    return x


def render(rows: list[dict], fields: list[str], fmt: str) -> str:
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for row in rows:
            w.writerow([format_value(row[f]) for f in fields])
    else:
        for row in rows:
            buf.write(json.dumps({f: _json_value(row[f]) for f in fields}) + "\n")
    return buf.getvalue()


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _parse_dist(text: str) -> DistributionSpec:
    return DistributionSpec.parse(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise _UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")


def _estimate_row(n, stat, est, seed):
    return {"n": n, "stat": stat.value, "mean": est.mean, "stddev": est.sample_stddev,
            "stderr": est.stderr, "ci95_low": est.ci95_low, "ci95_high": est.ci95_high,
            "reps": est.reps, "seed": seed}


def cmd_predict(args) -> tuple[list[dict], list[str]]:
    spec = _parse_dist(args.dist)
    rec = predict(spec, args.n)
    return [{"dist": str(spec), "n": rec.n, "g_of_inv_n": rec.g_of_inv_n,
             "em_n_predicted": rec.em_n_predicted,
             "em_assignment_predicted": rec.em_assignment_predicted,
             "exact_em_n": rec.exact_em_n, "notes": rec.notes}], PREDICT_FIELDS


def cmd_simulate(args):
    spec = _parse_dist(args.dist)
    stat = Statistic(args.stat)
    cfg = ExperimentConfig(spec, args.n, args.reps, stat, args.seed, args.workers)
    return [_estimate_row(args.n, stat, run(cfg), args.seed)], SIMULATE_FIELDS


def cmd_table(args):
    if not args.ns:
        raise _UsageError("--ns must list at least one size")
    rows = []
    for text in args.dists:
        spec = _parse_dist(text)
        for n in args.ns:
            rec = predict(spec, n)
            est = run(ExperimentConfig(spec, n, args.reps, Statistic.EXACT_MAX,
                                       args.seed, args.workers))
            rows.append({"dist": str(spec), "n": n, "g_of_inv_n": rec.g_of_inv_n,
                         "predicted": rec.em_assignment_predicted, "mc_mean": est.mean,
                         "mc_stderr": est.stderr,
                         "ratio": est.mean / rec.em_assignment_predicted,
                         "notes": rec.notes})
    return rows, TABLE_FIELDS


def cmd_parisi(args):
    if not 1 <= args.n_max <= PARISI_N_MAX:
        raise _UsageError(f"--n-max must lie in [1, {PARISI_N_MAX}]")
    rows = []

    def row(spec, n, target, kind, pre_asymptotic=False):
        est = run(ExperimentConfig(spec, n, args.reps, Statistic.EXACT_MIN, args.seed,
                                   args.workers))
        z = (est.mean - target) / est.stderr if est.stderr > 0 else 0.0
        rows.append({"dist": str(spec), "n": n, "stat": Statistic.EXACT_MIN.value,
                     "mc_mean": est.mean, "mc_stderr": est.stderr, "target": target,
                     "target_kind": kind, "z": z,
                     "flag": "pre-asymptotic" if pre_asymptotic else ""})

    for n in range(1, args.n_max + 1):
        row(exponential(1.0), n, parisi_sum(n), "parisi_sum")
    n = args.n_max
    row(uniform01(), n, mezard_parisi_expansion(n), "mezard_parisi_expansion",
        pre_asymptotic=n < PRE_ASYMPTOTIC_N)
    return rows, PARISI_FIELDS


def cmd_solve(args):
    try:
        a = read_matrix_csv(args.matrix)
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc
    res = solve(a, Sense(args.sense))
    return [{"n": a.shape[0], "sense": res.sense.value, "value": res.value,
             "permutation": " ".join(str(int(j) + 1) for j in res.permutation),
             "greedy_total": greedy_assign(a).total,
             "row_max_sum": row_max_sum(a)}], SOLVE_FIELDS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assignmax",
        description="Maximum of the random assignment process: predictions and simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def output_flags(p, default_out="-"):
        p.add_argument("--out", default=default_out, help="output path, '-' for stdout")
        p.add_argument("--format", choices=["csv", "jsonl"], default="csv")

    def mc_flags(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=None,
                       help=f"worker threads (default: ${WORKERS_ENV} or 1)")

    p = sub.add_parser("predict", help="leading-order g(1/n) and n g(1/n)")
    p.add_argument("--dist", required=True)
    p.add_argument("--n", type=int, required=True)
    output_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of one statistic")
    p.add_argument("--dist", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--stat", choices=[s.value for s in Statistic], default="exact-max")
    mc_flags(p)
    output_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("table", help="prediction vs simulation for the standard laws")
    p.add_argument("--ns", type=_int_list, required=True, help="e.g. 50,200")
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--dists", type=lambda s: s.split(","), default=TABLE_DISTS)
    mc_flags(p)
    output_flags(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("parisi", help="minimum assignment vs the exact finite-n values")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--reps", type=int, required=True)
    mc_flags(p)
    output_flags(p)
    p.set_defaults(func=cmd_parisi)

    p = sub.add_parser("solve", help="exact assignment of a CSV matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--sense", choices=[s.value for s in Sense], default="max")
    output_flags(p)
    p.set_defaults(func=cmd_solve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "workers") and args.workers is None:
            args.workers = _default_workers()
        rows, fields = args.func(args)
        text = render(rows, fields, args.format)
    except (_UsageError, DistributionError, AssumptionError, ConfigError, MatrixError,
            ValueError) as exc:
        print(f"assignmax {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (_IOFailure, OSError) as exc:
        print(f"assignmax {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"assignmax {args.command}: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

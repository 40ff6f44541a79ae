"""Command-line front end for the Monte Carlo experiment harness.

Exit codes: 0 success, 2 invalid arguments or parameters, 3 when
``--assert`` is given and a statistical gate fails.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from .harness import (
    ExperimentReport,
    ExperimentSpec,
    reports_to_csv,
    reports_to_json,
    run_experiment,
    summarize,
)
from .trees import ScalingReport, structure_scaling_report
from .walks import hitting_probability

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_GATE_FAILED = 3

DEFAULT_UST_GRID = "100,200,400,800,1600,3200,6400"


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r} ({exc})") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from None


def _add_common(sub: argparse.ArgumentParser, *, trials_default: int = 1000) -> None:
    sub.add_argument("--trials", type=int, default=trials_default, help="number of independent trials")
    sub.add_argument("--seed", type=int, default=0, help="master seed; all streams derive from it")
    sub.add_argument("--jobs", type=int, default=1, help="worker processes for trials")
    sub.add_argument("--out", type=Path, default=None, help="write the report rows to this file")
    sub.add_argument("--format", choices=("csv", "json"), default="csv", help="output file format")
    sub.add_argument(
        "--assert",
        dest="assert_gates",
        action="store_true",
        help="exit 3 unless the statistical gates for this experiment pass",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisyquery",
        description="Monte Carlo experiments for noisy-query algorithms.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    threshold = commands.add_parser("threshold", help="decide whether at least k of n bits are ones")
    threshold.add_argument("--n", type=int, required=True)
    threshold.add_argument("--k", type=int, required=True)
    threshold.add_argument("--p", type=float, required=True)
    threshold.add_argument("--delta", type=float, required=True)
    threshold.add_argument(
        "--ones",
        type=int,
        default=None,
        help="fixed number of ones per instance (default: k-1 or k by fair coin)",
    )
    _add_common(threshold)
    threshold.set_defaults(func=_cmd_simple, kind="threshold")

    for name, helptext in (
        ("counting", "count the ones exactly (one-sided algorithm)"),
        ("counting2", "count the ones exactly (orientation wrapper)"),
    ):
        counting = commands.add_parser(name, help=helptext)
        counting.add_argument("--n", type=int, required=True)
        counting.add_argument("--p", type=float, required=True)
        counting.add_argument("--delta", type=float, required=True)
        counting.add_argument("--ones", type=int, required=True, help="true number of ones per instance")
        if name == "counting2":
            counting.add_argument(
                "--asymptotic-presample",
                action="store_true",
                help="size the orientation presample as n^0.99 checks at error n^-100",
            )
        _add_common(counting)
        counting.set_defaults(func=_cmd_simple, kind=name)

    for name, helptext in (
        ("connectivity", "decide connectivity of hard spanning-tree instances"),
        ("st-connectivity", "decide s-t connectivity with uniform random terminals"),
    ):
        conn = commands.add_parser(name, help=helptext)
        conn.add_argument("--n", type=int, required=True)
        conn.add_argument("--p", type=float, required=True)
        conn.add_argument("--delta", type=float, required=True)
        conn.add_argument("--beta", type=_fraction, default=None, help="balance threshold (default 1/21)")
        _add_common(conn)
        conn.set_defaults(func=_cmd_simple, kind=name)

    influence = commands.add_parser("influence", help="influence identities on random truth tables")
    influence.add_argument("--n", type=int, required=True, help="arity of the random functions")
    influence.add_argument("--q", type=float, required=True, help="bias of the product measure")
    _add_common(influence, trials_default=100)
    influence.set_defaults(func=_cmd_simple, kind="influence")

    walk = commands.add_parser("walk-laws", help="gambler's-ruin hitting laws, one row per barrier")
    walk.add_argument("--p", type=float, required=True)
    walk.add_argument("--x-max", type=int, default=6, help="largest barrier distance (rows for 1..x-max)")
    _add_common(walk, trials_default=10**6)
    walk.set_defaults(func=_cmd_walk_laws, kind="walk-laws")

    ust = commands.add_parser("ust-stats", help="balanced-edge scaling of uniform spanning trees")
    ust.add_argument("--n-grid", type=_int_list, default=None, help=f"sizes (default {DEFAULT_UST_GRID})")
    ust.add_argument("--samples", type=int, default=200, help="trees per size")
    ust.add_argument("--beta", type=_fraction, default=Fraction(1, 3))
    ust.add_argument("--seed", type=int, default=0)
    ust.add_argument("--out", type=Path, default=None)
    ust.add_argument("--format", choices=("csv", "json"), default="csv")
    ust.add_argument("--assert", dest="assert_gates", action="store_true")
    ust.set_defaults(func=_cmd_ust_stats, kind="ust-stats")

    return parser


def _spec_from_args(args, kind: str, **overrides) -> ExperimentSpec:
    fields = dict(
        kind=kind,
        n=getattr(args, "n", None),
        k=getattr(args, "k", None),
        p=getattr(args, "p", None),
        delta=getattr(args, "delta", None),
        beta=getattr(args, "beta", None),
        q=getattr(args, "q", None),
        trials=args.trials,
        seed=args.seed,
        ones=getattr(args, "ones", None),
        asymptotic_presample=getattr(args, "asymptotic_presample", False),
        jobs=getattr(args, "jobs", 1),
    )
    fields.update(overrides)
    return ExperimentSpec(**fields)


def _gate_failures(report: ExperimentReport) -> list[str]:
    spec = report.spec
    failures = []
    if spec.kind == "influence":
        if report.errors:
            failures.append(f"influence: {report.errors} identity violations")
        return failures
    if spec.kind == "walk-laws":
        law = hitting_probability(spec.p, spec.k)
        slack = 3.0 * math.sqrt(law * (1.0 - law) / spec.trials)
        if abs(report.error_rate - law) > slack:
            failures.append(
                f"walk-laws x={spec.k}: hit rate {report.error_rate:.6g} departs from {law:.6g} by more than 3 sigma"
            )
        if abs(report.ratio - 1.0) > 0.02:
            failures.append(
                f"walk-laws x={spec.k}: mean passage time off the exact law by {abs(report.ratio - 1) * 100:.2f}% (> 2%)"
            )
        return failures
    gate = spec.delta + 3.0 * math.sqrt(spec.delta * (1.0 - spec.delta) / spec.trials)
    if report.error_rate > gate:
        failures.append(f"{spec.kind}: error rate {report.error_rate:.6g} exceeds delta+3sigma = {gate:.6g}")
    return failures


def _emit(reports: list[ExperimentReport], args) -> None:
    for report in reports:
        print(summarize(report))
    if args.out is not None:
        text = reports_to_csv(reports) if args.format == "csv" else reports_to_json(reports)
        args.out.write_text(text)
        print(f"wrote {args.out}")


def _cmd_simple(args) -> int:
    spec = _spec_from_args(args, args.kind)
    reports = [run_experiment(spec)]
    _emit(reports, args)
    return _finish(reports, args)


def _cmd_walk_laws(args) -> int:
    if args.x_max < 1:
        raise ValueError("x-max must be >= 1")
    reports = [
        run_experiment(_spec_from_args(args, "walk-laws", k=x)) for x in range(1, args.x_max + 1)
    ]
    _emit(reports, args)
    return _finish(reports, args)


def _finish(reports: list[ExperimentReport], args) -> int:
    if not args.assert_gates:
        return EXIT_OK
    failures = [line for report in reports for line in _gate_failures(report)]
    for line in failures:
        print(f"GATE FAIL {line}", file=sys.stderr)
    return EXIT_GATE_FAILED if failures else EXIT_OK


def _scaling_csv(report: ScalingReport) -> str:
    lines = ["beta,n,samples,balanced_median,balanced_mean,s_sum_median,s_sum_mean"]
    for row in report.rows:
        lines.append(
            f"{report.beta},{row.n},{row.samples},{row.balanced_median!r},"
            f"{row.balanced_mean!r},{row.s_sum_median!r},{row.s_sum_mean!r}"
        )
    return "\n".join(lines) + "\n"


def _scaling_json(report: ScalingReport) -> str:
    payload = {
        "beta": str(report.beta),
        "rows": [
            {
                "n": row.n,
                "samples": row.samples,
                "balanced_median": row.balanced_median,
                "balanced_mean": row.balanced_mean,
                "s_sum_median": row.s_sum_median,
                "s_sum_mean": row.s_sum_mean,
            }
            for row in report.rows
        ],
        "slopes": {
            "balanced_median": report.balanced_median_slope,
            "balanced_mean": report.balanced_mean_slope,
            "s_sum_median": report.s_sum_median_slope,
            "s_sum_mean": report.s_sum_mean_slope,
        },
    }
    return json.dumps(payload, indent=2) + "\n"


def _cmd_ust_stats(args) -> int:
    grid = args.n_grid if args.n_grid is not None else _int_list(DEFAULT_UST_GRID)
    report = structure_scaling_report(grid, args.samples, args.beta, args.seed)
    for row in report.rows:
        print(
            f"n={row.n} samples={row.samples} balanced_median={row.balanced_median:g} "
            f"s_sum_median={row.s_sum_median:g}"
        )
    print(
        f"slopes: balanced_median={report.balanced_median_slope:.4f} "
        f"s_sum_median={report.s_sum_median_slope:.4f}"
    )
    if args.out is not None:
        text = _scaling_csv(report) if args.format == "csv" else _scaling_json(report)
        args.out.write_text(text)
        print(f"wrote {args.out}")
    if args.assert_gates:
        failures = []
        if not 0.4 <= report.balanced_median_slope <= 0.6:
            failures.append(f"balanced-edge slope {report.balanced_median_slope:.4f} outside 0.5 +/- 0.1")
        if not 1.4 <= report.s_sum_median_slope <= 1.6:
            failures.append(f"split-size slope {report.s_sum_median_slope:.4f} outside 1.5 +/- 0.1")
        for line in failures:
            print(f"GATE FAIL ust-stats: {line}", file=sys.stderr)
        if failures:
            return EXIT_GATE_FAILED
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

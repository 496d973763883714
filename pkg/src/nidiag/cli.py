"""Command-line front end with a frozen exit-code contract.

Exit codes: 0 success, 1 internal numeric failure, 2 invalid configuration
or arguments, 3 breakpoint budget exhausted (partial results written),
4 reproduction tolerance failure.

Numeric CSV cells use 17 significant digits, '.' decimal separators and LF
line endings; JSON reports are written with sorted keys.  Outputs are
byte-identical across runs for a fixed configuration and seeds.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, build_family, load_config
from .diagnostics import (
    beta_curve,
    classify,
    inf_restricted_curve,
    inf_wedge_curve,
)
from .experiments import EXPERIMENTS, run_experiments, write_report
from .vallee_poussin import (
    BreakpointBudgetError,
    BreakpointSequence,
    PhiFunction,
    PiecewiseLinearG,
    breakpoint_rows,
    find_breakpoints,
    phi_table_rows,
)

__all__ = ["main", "REPORT_SCHEMA", "EXIT_OK", "EXIT_INTERNAL", "EXIT_CONFIG", "EXIT_BUDGET", "EXIT_TOLERANCE"]

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_TOLERANCE = 4

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema", "family", "window", "grid", "m_max", "verdicts"],
    "properties": {
        "schema": {"const": "nidiag-report-v1"},
        "family": {"type": "object"},
        "window": {
            "type": "object",
            "additionalProperties": False,
            "required": ["min", "max"],
            "properties": {
                "min": {"type": "integer", "minimum": 1},
                "max": {"type": "integer", "minimum": 1},
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["min", "max", "points", "spacing"],
            "properties": {
                "min": {"type": "number"},
                "max": {"type": "number"},
                "points": {"type": "integer", "minimum": 2},
                "spacing": {"enum": ["linear", "logarithmic"]},
            },
        },
        "m_max": {"type": "integer", "minimum": 1},
        "verdicts": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["criterion", "status", "evidence"],
                "properties": {
                    "criterion": {
                        "enum": ["W-UNI", "UNI", "W*-UNI", "beta-positive", "NI-single"]
                    },
                    "status": {
                        "enum": [
                            "CertifiedDiverges",
                            "CertifiedBoundedInf",
                            "NumericTrend",
                            "Inconclusive",
                        ]
                    },
                    "evidence": {"type": "object"},
                },
            },
        },
    },
}


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return format(float(x), ".17g")


def _write_text(path: str | Path, text: str) -> None:
    p = Path(path)
    if p.parent != Path(""):
        p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8", newline="\n")


def cmd_analyze(config: RunConfig, out_path: str, curves_path: str) -> int:
    family = build_family(config)
    grid = config.a_grid
    verdicts = classify(family, grid, config.m_max)
    report = {
        "schema": "nidiag-report-v1",
        "family": config.family,
        "window": {"min": family.window[0], "max": family.window[1]},
        "grid": {
            "min": grid.min,
            "max": grid.max,
            "points": grid.points,
            "spacing": grid.spacing,
        },
        "m_max": config.m_max,
        "verdicts": [
            {"criterion": v.criterion, "status": v.status, "evidence": v.evidence}
            for v in verdicts
        ],
    }
    _write_text(out_path, json.dumps(report, sort_keys=True, indent=2) + "\n")

    wedge = inf_wedge_curve(family, grid)
    restricted = inf_restricted_curve(family, grid)
    beta = beta_curve(family, grid)
    lines = ["a,inf_wedge,inf_restricted,beta,bound_lo,bound_hi,argmin_index"]
    for i, a in enumerate(wedge.levels):
        lo = "" if wedge.lower_bound is None else _fmt(wedge.lower_bound[i])
        hi = "" if wedge.upper_bound is None else _fmt(wedge.upper_bound[i])
        lines.append(
            ",".join(
                [
                    _fmt(float(a)),
                    _fmt(float(wedge.values[i])),
                    _fmt(float(restricted.values[i])),
                    _fmt(float(beta.values[i])),
                    lo,
                    hi,
                    str(int(wedge.argmin_index[i])),
                ]
            )
        )
    _write_text(curves_path, "\n".join(lines) + "\n")
    return EXIT_OK


def _write_breakpoints_csv(path: str | Path, rows: list[tuple[int, int, float]]) -> None:
    lines = ["k,n_k,g_slope"]
    for k, nk, slope in rows:
        lines.append(f"{k},{nk},{_fmt(slope)}")
    _write_text(path, "\n".join(lines) + "\n")


def cmd_vp(config: RunConfig, out_path: str) -> int:
    family = build_family(config)
    out = Path(out_path)
    phi_path = out.with_name(out.stem + "_phi.csv")
    try:
        bp = find_breakpoints(family, config.vp_count, config.vp_budget)
    except BreakpointBudgetError as exc:
        rows = []
        if len(exc.partial) >= 2:
            rows = breakpoint_rows(PhiFunction(PiecewiseLinearG(BreakpointSequence(exc.partial))))
        _write_breakpoints_csv(out, rows)
        print(f"nidiag vp: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    phi = PhiFunction(PiecewiseLinearG(bp), rel_tol=config.invert_rel)
    _write_breakpoints_csv(out, breakpoint_rows(phi))
    lines = ["x,g,h,phi,extrapolated"]
    for x, g, h, p, flag in phi_table_rows(phi):
        lines.append(f"{_fmt(x)},{_fmt(g)},{_fmt(h)},{_fmt(p)},{flag}")
    _write_text(phi_path, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_reproduce(which: str, out_dir: str, mc_seed: int | None, threads: int) -> int:
    if which == "all":
        names = list(EXPERIMENTS)
    elif which in EXPERIMENTS:
        names = [which]
    else:
        print(
            f"nidiag reproduce: unknown experiment {which!r}; "
            f"choose from {', '.join(EXPERIMENTS)} or 'all'",
            file=sys.stderr,
        )
        return EXIT_CONFIG
    kwargs = {} if mc_seed is None else {"mc_seed": mc_seed}
    reports = run_experiments(names, max_workers=threads, **kwargs)
    failed = []
    for report in reports:
        write_report(report, out_dir)
        failed.extend(f"{report.name}: {f}" for f in report.failures())
    if failed:
        for f in failed:
            print(f"nidiag reproduce: tolerance failure in {f}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nidiag",
        description=(
            "Nonintegrability diagnostics: infimum curves and certified "
            "verdicts for indexed families of heavy-tailed laws, plus the "
            "constructive ramp transform preserving divergence."
        ),
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="upper bound on internal worker threads (default: CPU count)",
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="override the configured Monte Carlo seed"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser(
        "analyze", help="write a verdict report (JSON) and infimum curves (CSV)"
    )
    p_an.add_argument("--config", required=True, help="path to the JSON run configuration")
    p_an.add_argument("--out", required=True, help="output path for the JSON report")
    p_an.add_argument("--curves", required=True, help="output path for the curves CSV")

    p_vp = sub.add_parser(
        "vp", help="construct the ramp transform: breakpoints CSV plus a sample table"
    )
    p_vp.add_argument("--config", required=True, help="path to the JSON run configuration")
    p_vp.add_argument(
        "--out",
        required=True,
        help="output path for the breakpoints CSV; the sample table lands at *_phi.csv",
    )

    p_re = sub.add_parser("reproduce", help="run the built-in desk-scale reproductions")
    p_re.add_argument(
        "which",
        help=f"experiment name: one of {', '.join(EXPERIMENTS)}, or 'all'",
    )
    p_re.add_argument("--out", required=True, help="output directory for report files")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("nidiag: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "analyze":
            config = load_config(args.config)
            if args.seed is not None:
                from dataclasses import replace

                config = replace(config, mc_seed=args.seed)
            return cmd_analyze(config, args.out, args.curves)
        if args.command == "vp":
            config = load_config(args.config)
            return cmd_vp(config, args.out)
        if args.command == "reproduce":
            return cmd_reproduce(args.which, args.out, args.seed, args.threads)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"nidiag: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BreakpointBudgetError as exc:
        print(f"nidiag: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except Exception as exc:  # pragma: no cover - defensive
        print(f"nidiag: internal failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())

"""
Command line entry point.

    nfrht spectrum|power-omega0|power-z0|density-omega0 [--config PATH]
          [--out CSV] [--plot SVG] [--axes linear|loglog|semilogx]
          [--workers N] [--near-field]
    nfrht validate [--fast]

Exit codes: 0 success, 2 configuration error, 3 at least one grid point
failed to converge (or, for ``validate``, at least one oracle failed).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from nfrht.config import ParseError, RunConfig, load_config
from nfrht.sweeps import (
    FLAG_OK, SweepSpec, ValidationError, default_workers, emit_csv, emit_plot, run_sweep, write_csv,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

COMMANDS = {
    "spectrum": ("spectrum_vs_omega", "linear"),
    "power-omega0": ("power_vs_omega0", "loglog"),
    "power-z0": ("power_vs_z0", "loglog"),
    "density-omega0": ("density_vs_omega0_at_peak", "semilogx"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nfrht", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (kind, _) in COMMANDS.items():
        p = sub.add_parser(name, help=f"run a {kind} sweep")
        p.add_argument("--config", help="scenario file (defaults to the SiC reference scenario)")
        p.add_argument("--out", help="CSV output path (stdout if omitted)")
        p.add_argument("--plot", help="SVG output path")
        p.add_argument("--axes", choices=("linear", "loglog", "semilogx"))
        p.add_argument("--workers", type=int, default=None,
                       help="worker processes (default: $NFRHT_WORKERS or 1)")
        p.add_argument("--near-field", action="store_true", help="use the quasi-static overlap")
    v = sub.add_parser("validate", help="run the oracle suite")
    v.add_argument("--fast", action="store_true", help="fewer frequencies, near-field total power")
    return parser


def _select_sweep(cfg: RunConfig, kind: str) -> SweepSpec:
    for s in cfg.sweeps:
        if s.kind == kind:
            return s
    return SweepSpec(kind=kind)


def _run(args) -> int:
    kind, default_axes = COMMANDS[args.command]
    try:
        cfg = load_config(args.config) if args.config else RunConfig.default()
        scenario = cfg.scenario
        if args.near_field:
            scenario = replace(scenario, near_field=True)
        spec = _select_sweep(cfg, kind)
        workers = args.workers if args.workers is not None else default_workers()
        if workers < 1:
            raise ValidationError("workers >= 1")
        series = run_sweep(spec, scenario, workers=workers)
    except (ParseError, ValidationError, OSError) as exc:
        print(f"nfrht: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.out:
        emit_csv(series, args.out)
    else:
        write_csv(series, sys.stdout)
    if args.plot:
        try:
            emit_plot(series, args.plot, args.axes or default_axes)
        except ValidationError as exc:
            print(f"nfrht: cannot plot: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    failed = sum(1 for r in series.rows if r[3] != FLAG_OK)
    if failed:
        print(f"nfrht: {failed} of {len(series.rows)} points failed to converge", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _validate(args) -> int:
    from nfrht.validation import run_validation

    reports = run_validation(fast=args.fast)
    for r in reports:
        print(r.line())
    ok = all(r.passed for r in reports)
    print(f"{sum(r.passed for r in reports)}/{len(reports)} oracle checks passed")
    return EXIT_OK if ok else EXIT_NUMERIC


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        return _validate(args)
    return _run(args)


if __name__ == "__main__":
    sys.exit(main())

"""``netosc`` command line entry point."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .config import SCENARIOS, apply_overrides, parse_config
from .errors import NetOscError
from .runner import run_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netosc",
        description="Oscillation-model simulations: wave equation, first-order "
                    "fundamental equation and echo-chamber phase dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SCENARIOS:
        p = sub.add_parser(name, help=f"run the {name} scenario")
        p.add_argument("--config", required=True, help="scenario JSON file")
        p.add_argument("--rep", choices=["A", "B", "both"], help="representation(s) to run")
        p.add_argument("--dt", type=float, help="fixed integration step")
        p.add_argument("--T", type=float, help="time horizon")
        p.add_argument("--out", help="output directory")
        p.add_argument("--plot-data", action="store_true", default=None,
                       help="write two-column t/value .dat files per observable")
        p.add_argument("--figures", action="store_true", default=None,
                       help="render PNG figures next to the CSV output")
    return parser


def _error_report(out_dir, exc) -> None:
    report = {"error": type(exc).__name__, "message": str(exc)}
    step = getattr(exc, "step", None)
    if step is not None:
        report["step"] = step
    try:
        io.write_json(Path(out_dir) / "error.json", report)
    except OSError:
        pass
    print(json.dumps(report), file=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out_dir = Path(args.out) if args.out else Path("out")
    try:
        cfg = parse_config(args.config, scenario=args.command)
        cfg = apply_overrides(cfg, rep=args.rep, dt=args.dt, T=args.T, out=args.out,
                              plot_data=args.plot_data, figures=args.figures)
        out_dir = cfg.out
        summary = run_scenario(cfg)
    except (NetOscError, ValueError, OSError) as exc:
        _error_report(out_dir, exc)
        return 2
    print(json.dumps(io.to_jsonable(summary.to_dict()), indent=2))
    return summary.exit_code


if __name__ == "__main__":
    sys.exit(main())

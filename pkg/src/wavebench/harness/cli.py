"""Command-line entry point for the benchmark harness."""

from __future__ import annotations

import argparse
import json
import sys

from ..errors import WavebenchError
from .experiments import run_bler_experiment, run_psd_experiment
from .scenario import bundled_scenarios, load_scenario


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", required=True,
                   help="scenario file path or bundled scenario name")
    p.add_argument("--out", default="results", help="output directory")
    p.add_argument("--workers", type=int, default=1, help="parallel workers")
    p.add_argument("--seed", type=int, default=None,
                   help="override the scenario master seed")
    p.add_argument("--desk-scale", action="store_true",
                   help="apply the scenario's desk-scale (CI) overrides")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavebench",
        description="Link-level benchmark harness for multicarrier waveforms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_psd = sub.add_parser("psd", help="PSD traces and OOB summary")
    _add_common(p_psd)

    p_bler = sub.add_parser("bler", help="BLER sweep")
    _add_common(p_bler)

    p_val = sub.add_parser("validate", help="validate a scenario file")
    p_val.add_argument("scenario", help="scenario file path or bundled name")
    p_val.add_argument("--desk-scale", action="store_true")

    sub.add_parser("list-scenarios", help="list bundled scenarios")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-scenarios":
            for name in bundled_scenarios():
                print(name)
            return 0
        if args.command == "validate":
            scenario = load_scenario(args.scenario, desk_scale=args.desk_scale)
            json.dump(scenario.resolved_dict(), sys.stdout, indent=2, sort_keys=True)
            print()
            return 0
        scenario = load_scenario(
            args.scenario, desk_scale=args.desk_scale, master_seed=args.seed
        )
        if args.command == "psd":
            rows = run_psd_experiment(scenario, args.out, workers=args.workers)
        else:
            rows = run_bler_experiment(scenario, args.out, workers=args.workers)
        print(f"{scenario.name}: wrote {len(rows)} rows to {args.out}/")
        return 0
    except WavebenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: run scenarios, list bundled configs, and
execute the acceptance suite.

Exit codes: 0 success, 1 configuration or I/O error, 2 resolution
violation (grid or quadrature too coarse for the requested evaluation).
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .config import ConfigError, load_config
from .core import ResolutionError, ValidationError


def _bundled_scenarios():
    base = resources.files("qbounce.scenarios")
    return sorted(entry.name for entry in base.iterdir()
                  if entry.name.endswith(".cfg"))


def _resolve_config_path(name: str) -> Path:
    path = Path(name)
    if path.exists():
        return path
    if not name.endswith(".cfg"):
        name = name + ".cfg"
    base = resources.files("qbounce.scenarios")
    candidate = base / name
    if candidate.is_file():
        return Path(str(candidate))
    raise ConfigError(f"no such config file or bundled scenario: {name}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qbounce",
        description="Propagate 1-D wave packets bouncing off an infinite wall "
                    "and export plot-ready series and snapshot data.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario config")
    run_p.add_argument("config", help="path to a .cfg file or a bundled scenario name")
    run_p.add_argument("--output-dir", default=None,
                       help="override output.dir from the config")
    run_p.add_argument("--format", choices=("csv", "jsonl"), default=None,
                       help="override output.format from the config")
    run_p.add_argument("--threads", type=int, default=1,
                       help="parallel snapshot workers")

    sub.add_parser("list-scenarios", help="list bundled scenario configs")

    acc_p = sub.add_parser("accept", help="run the acceptance suite")
    acc_p.add_argument("--fast", action="store_true",
                       help="skip the slowest (Lorentzian) criteria")

    args = parser.parse_args(argv)

    if args.command == "list-scenarios":
        for name in _bundled_scenarios():
            print(name)
        return 0

    if args.command == "accept":
        from .acceptance import print_report
        return print_report(fast=args.fast)

    try:
        config = load_config(_resolve_config_path(args.config))
        if args.format is not None:
            from dataclasses import replace
            config = replace(config, output_format=args.format)
        from .runner import run_scenario
        summary = run_scenario(config, output_dir=args.output_dir,
                               threads=max(1, args.threads))
    except (ConfigError, ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ResolutionError as exc:
        print(f"resolution error: {exc}", file=sys.stderr)
        return 2
    for key in sorted(summary):
        print(f"{key}: {summary[key]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

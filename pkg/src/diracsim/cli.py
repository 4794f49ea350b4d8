"""Command-line entry point for scenario execution.

Exit codes: 0 on success, 2 for configuration problems (including unknown
subcommands and bad config files), 3 for numerical failures during a run.
"""

from __future__ import annotations

import argparse
import sys

import yaml

from ._version import __version__
from .errors import (
    ConfigError,
    ConvergenceFailure,
    DegenerateDrive,
    DegenerateSpectrum,
    InvalidInput,
    UnsupportedConfiguration,
)
from .scenarios import (
    SCENARIO_NAMES,
    load_config_file,
    resolve_config,
    run_scenario,
    scenario_defaults,
)

_CONFIG_ERRORS = (ConfigError, InvalidInput, UnsupportedConfiguration)
_NUMERICAL_ERRORS = (ConvergenceFailure, DegenerateSpectrum, DegenerateDrive)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracsim",
        description="Four-level quantum simulator of a relativistic particle, "
        "with a two-transmon circuit realization.",
    )
    sub = parser.add_subparsers(dest="command")

    run_p = sub.add_parser("run", help="execute a scenario from a config file")
    run_p.add_argument("config", help="YAML config file")
    run_p.add_argument("--out", metavar="DIR", default=None, help="output directory")
    run_p.add_argument(
        "--threads", metavar="N", type=int, default=1, help="worker threads"
    )
    run_p.add_argument(
        "--no-svg", action="store_true", help="skip SVG plot emission"
    )

    sub.add_parser("list-scenarios", help="print the available scenario names")

    pd = sub.add_parser("print-defaults", help="print a scenario's default config")
    pd.add_argument("scenario", help="scenario name")

    sub.add_parser("version", help="print the package version")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)

    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2

    if args.command == "version":
        print(__version__)
        return 0

    if args.command == "list-scenarios":
        for name in SCENARIO_NAMES:
            print(name)
        return 0

    if args.command == "print-defaults":
        try:
            defaults = scenario_defaults(args.scenario)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(yaml.safe_dump(defaults, sort_keys=False, default_flow_style=False), end="")
        return 0

    # run
    try:
        raw = load_config_file(args.config)
        cfg = resolve_config(raw)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
    except _CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        bundle = run_scenario(
            cfg, out_dir=args.out, threads=args.threads, emit_svg=not args.no_svg
        )
    except _CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    print(f"scenario: {bundle.scenario}")
    print(f"output: {bundle.out_dir}")
    for name in sorted(bundle.csv_paths):
        print(f"  csv: {name}.csv")
    for name in sorted(bundle.svg_paths):
        print(f"  svg: {name}.svg")
    return 0


if __name__ == "__main__":
    sys.exit(main())

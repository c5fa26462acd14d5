"""Command line front end.

Subcommands::

    chancap run <config.yaml>    compute the configured quantities
    chancap figure <preset>      reproduce a figure-scale study
    chancap validate <config>    parse + validate, print the run plan

Common flags: ``--out DIR`` (output directory; also honours the
CHANCAP_OUT environment variable), ``--svg`` (render figures during
``run``), ``--grid-scale F`` (multiply grid node counts, for convergence
studies).  Exit codes: 0 success, 2 configuration error, 3 numerical
failure.
"""

import argparse
import sys

from chancap import config as cfg
from chancap.errors import ConfigError, NumericalError
from chancap.presets import PRESETS, run_preset
from chancap.runner import run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chancap",
        description="time-dependent qubit channel capacities and non-Markovianity measures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a run configuration")
    p_run.add_argument("config", help="path to a YAML run configuration")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--svg", action="store_true", help="also render SVG figures")
    p_run.add_argument(
        "--grid-scale", type=float, default=1.0, help="multiply grid node counts"
    )

    p_fig = sub.add_parser("figure", help="reproduce a preset figure study")
    p_fig.add_argument("preset", help=f"one of: {', '.join(sorted(PRESETS))}")
    p_fig.add_argument("--out", default=None, help="output directory")
    p_fig.add_argument(
        "--svg", action="store_true", help="accepted for symmetry; presets always render SVG"
    )
    p_fig.add_argument(
        "--grid-scale", type=float, default=1.0, help="multiply grid node counts"
    )

    p_val = sub.add_parser("validate", help="validate a run configuration")
    p_val.add_argument("config", help="path to a YAML run configuration")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            config = cfg.load_config(args.config)
            print("configuration OK")
            for line in _plan_lines(config):
                print(" ", line)
            return EXIT_OK
        if args.command == "run":
            config = cfg.load_config(args.config)
            out_dir = cfg.resolve_output_dir(args.out, config.output.directory)
            written = run(config, out_dir, figure=args.svg, grid_scale=args.grid_scale)
            for path in written:
                print(path)
            return EXIT_OK
        if args.command == "figure":
            out_dir = cfg.resolve_output_dir(args.out, None)
            written = run_preset(args.preset, out_dir, svg=True, grid_scale=args.grid_scale)
            for path in written:
                print(path)
            return EXIT_OK
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def _plan_lines(config):
    env = ", ".join(f"{k}={v}" for k, v in config.environment.items())
    yield f"channel: {config.channel}"
    yield f"environment: {env}"
    yield f"grid: t_max={config.grid.t_max} n={config.grid.n}"
    yield f"quantities: {', '.join(config.quantities)}"
    if config.sweep:
        values = ", ".join(f"{v:g}" for v in config.sweep.values)
        yield f"sweep: {config.sweep.parameter} in [{values}]"


if __name__ == "__main__":
    sys.exit(main())

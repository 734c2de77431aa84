"""Command line runner.

Examples:
    dlrt --problem plane_source --solver dlra --output-dir out \\
         --set n_x=200 --set n_moments=100 --set t_end=8

Exit codes: 0 success, 2 configuration/validation error, 3 numerical blowup.
"""

import argparse
import os
import sys

from .errors import ConfigError, NumericalBlowupError, RankOverflowError
from .problems import PROBLEMS, SOLVERS, parse_config
from .runner import run_simulation


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlrt",
        description="Low-rank and full-order solvers for the Su-Olson "
        "thermal radiative transfer benchmark problems.",
    )
    parser.add_argument("--config", help="path to a key = value config file")
    parser.add_argument("--problem", choices=PROBLEMS, help="bundled problem")
    parser.add_argument("--solver", choices=SOLVERS, help="time stepper")
    parser.add_argument(
        "--output-dir",
        default=None,
        help="directory for history/snapshot CSVs "
        "(default: $DLRT_OUTPUT_DIR if set)",
    )
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override any config key (repeatable)",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress summary")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides: dict[str, str] = {}
    for item in args.overrides:
        if "=" not in item:
            print(f"error: --set expects KEY=VALUE, got {item!r}", file=sys.stderr)
            return 2
        key, _, value = item.partition("=")
        overrides[key.strip()] = value.strip()
    if args.problem:
        overrides["problem"] = args.problem
    if args.solver:
        overrides["solver"] = args.solver
    out_dir = args.output_dir or os.environ.get("DLRT_OUTPUT_DIR")
    if out_dir:
        overrides["output_dir"] = out_dir

    try:
        config = parse_config(args.config or "", overrides)
        result = run_simulation(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalBlowupError, RankOverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if not args.quiet:
        h = result.history
        print(
            f"{config.problem} [{config.solver}] finished: t = {h.t[-1]:g}, "
            f"{len(h) - 1} steps, rank = {h.rank[-1]}, "
            f"mass = {h.mass[-1]:.6e}, energy = {h.energy[-1]:.6e}, "
            f"rel mass err = {h.rel_mass_err[-1]:.3e}, "
            f"wall = {h.wall_s[-1]:.2f}s"
        )
        for name, path in sorted(result.outputs.items()):
            print(f"  wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

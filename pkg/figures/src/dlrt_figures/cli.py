"""Command line figure renderer.

Example:
    dlrt-render --kind profiles --in full/snapshot_000.csv dlra/snapshot_000.csv \\
        --out profiles.png
"""

import argparse
import sys

from .render import KINDS, FigureSpec, render
from .schemas import SchemaError


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dlrt-render",
        description="Render figures from dlrt solver CSV outputs.",
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="inputs", required=True, nargs="+",
                        metavar="CSV", help="input CSV path(s)")
    parser.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        path = render(FigureSpec(args.kind, tuple(args.inputs), args.out))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

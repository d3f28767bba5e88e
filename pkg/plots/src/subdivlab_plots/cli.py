"""plots: render figures from subdivlab CSV artifacts.

Usage: plots render --kind scan-ratio --in scan.csv --out scan.png
Exit codes: 0 success, 2 schema mismatch or unreadable input.
"""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, PlotSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plots")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure from a CSV artifact")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--in", dest="input_csv", required=True)
    p.add_argument("--out", dest="output_image", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = PlotSpec(input_csv=args.input_csv, kind=args.kind,
                        output_image=args.output_image)
        render(spec)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

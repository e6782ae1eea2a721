"""Command-line entry point: figures <kind> --in <csv> --out <png>."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, FigureSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figures", description=__doc__)
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="source", required=True, help="input CSV path")
    parser.add_argument("--out", dest="out", required=True, help="output image path")
    parser.add_argument("--lambda-range", dest="lambda_range", default="0,1",
                        help="vertical axis range, 'min,max'")
    parser.add_argument("--eg-range", dest="eg_range", default="0,1",
                        help="horizontal axis range, 'min,max'")
    return parser


def parse_range(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'min,max', got '{text}'")
    lo, hi = float(parts[0]), float(parts[1])
    if not lo < hi:
        raise ValueError(f"range must be increasing, got '{text}'")
    return lo, hi


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            kind=args.kind,
            source=args.source,
            out=args.out,
            lambda_range=parse_range(args.lambda_range),
            eg_range=parse_range(args.eg_range),
        )
        render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

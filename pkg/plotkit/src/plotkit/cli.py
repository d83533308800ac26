"""plotkit command line: render one figure from a data directory."""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_IDS, render
from .schema import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="render jjmeta output files into figures",
    )
    parser.add_argument("figure", choices=FIGURE_IDS)
    parser.add_argument("--data", required=True, help="directory of data files")
    parser.add_argument("--out", required=True, help="output image path (.png/.svg)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        path = render(args.figure, args.data, args.out)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    print(path)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command line: plotkit <figure-id> --data <dir> --out <file.png>."""

from __future__ import annotations

import argparse
import sys

from .recipes import RECIPES, PlotkitError, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="plotkit",
        description="Render static figures from eitfluct CSV data")
    ap.add_argument("figure_id", choices=sorted(RECIPES))
    ap.add_argument("--data", required=True, help="directory with the CSVs")
    ap.add_argument("--out", required=True, help="output image path")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = render(args.figure_id, args.data, args.out)
    except PlotkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

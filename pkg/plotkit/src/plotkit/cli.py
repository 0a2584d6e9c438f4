"""Command line: ``plotkit render --kind trace|loglog_pure|loglog_noisy --in f.csv --out fig.png``.

Exit codes: 0 success, 1 schema/validation error (column diff on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .csvio import SchemaError
from .figures import FIGURE_KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plotkit")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure from a sweep CSV")
    p.add_argument("--kind", choices=FIGURE_KINDS, required=True)
    p.add_argument("--in", dest="input_csv", required=True, help="input CSV path")
    p.add_argument("--out", dest="out_path", required=True, help="output image path")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        render(FigureSpec(args.input_csv, args.kind, args.out_path))
    except (SchemaError, OSError, ValueError) as exc:
        print(f"plotkit: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""The `plot` command: sweep CSV(s) in, PNG out.

    plot --kind rate-vs-p --in sweep.csv --out fig.png
    plot --kind rate-per-cycle --in a.csv --in b.csv --out fig.png

Exit code 0 on success, 1 for schema/data/file errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .csvio import EmptyDataError, SchemaError
from .figures import KINDS, PlotSpec, plot


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plot", description=__doc__)
    parser.add_argument("--kind", required=True, choices=KINDS,
                        help="which figure to draw")
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        metavar="CSV", help="input sweep CSV (repeat for more series)")
    parser.add_argument("--out", required=True, metavar="PNG",
                        help="output image path")
    parser.add_argument("--log-x", action=argparse.BooleanOptionalAction,
                        default=None,
                        help="force the x axis log/linear (default: per kind)")
    parser.add_argument("--log-y", action=argparse.BooleanOptionalAction,
                        default=None,
                        help="force the y axis log/linear (default: linear)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    spec = PlotSpec(
        inputs=tuple(Path(p) for p in args.inputs),
        kind=args.kind,
        output=Path(args.out),
        log_x=args.log_x,
        log_y=args.log_y,
    )
    try:
        path = plot(spec)
    except (SchemaError, EmptyDataError, ValueError, OSError) as exc:
        print(f"plot: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""render-figures: draw the figure set from experiment CSV outputs."""

from __future__ import annotations

import argparse
import sys

from review_lottery_figures.data import FigureDataError
from review_lottery_figures.render import FIGURE_IDS, FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render-figures",
        description="Render review-lottery figures from experiment CSVs.")
    parser.add_argument("--which", default="all",
                        help="comma-separated figure ids, or 'all' "
                             f"(available: {', '.join(FIGURE_IDS)})")
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory holding the experiment CSV outputs")
    parser.add_argument("--out", dest="out_dir", required=True,
                        help="directory for the rendered PNG/PDF files")
    args = parser.parse_args(argv)

    ids = FIGURE_IDS if args.which == "all" else tuple(
        w.strip() for w in args.which.split(",") if w.strip())
    try:
        for figure_id in ids:
            result = render(FigureSpec.for_directory(figure_id, args.in_dir,
                                                     args.out_dir))
            for path in result.paths:
                print(path)
    except FigureDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

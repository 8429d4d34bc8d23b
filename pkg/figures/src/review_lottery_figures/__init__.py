"""Figure rendering for review-lottery experiment CSV outputs."""

from review_lottery_figures.data import FigureDataError, Table, read_table
from review_lottery_figures.render import (
    DEFAULT_INPUTS,
    FIGURE_IDS,
    FigureSpec,
    RenderResult,
    render,
    zero_contour,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_INPUTS",
    "FIGURE_IDS",
    "FigureDataError",
    "FigureSpec",
    "RenderResult",
    "Table",
    "read_table",
    "render",
    "zero_contour",
    "__version__",
]

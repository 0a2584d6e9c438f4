"""Figure rendering for gradient-estimation sweep tables (CSV in, image out)."""

from .csvio import SchemaError, Table, read_table
from .figures import FIGURE_KINDS, FigureSpec, render

__version__ = "0.1.0"

__all__ = ["FIGURE_KINDS", "FigureSpec", "SchemaError", "Table", "read_table", "render", "__version__"]

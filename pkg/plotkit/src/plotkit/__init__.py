"""Display-only renderer for the simulation suite's output files."""

__version__ = "0.1.0"

from .render import FIGURE_IDS, render
from .schema import SchemaError

__all__ = ["FIGURE_IDS", "render", "SchemaError", "__version__"]

"""Static figures from subdivlab CSV artifacts."""

from .render import KINDS, PlotSpec, SchemaError, render

__version__ = "0.1.0"

__all__ = ["PlotSpec", "SchemaError", "render", "KINDS", "__version__"]

"""Figure generation for dlrt solver CSV outputs."""

from .render import KINDS, FigureSpec, render
from .schemas import SchemaError

__all__ = ["KINDS", "FigureSpec", "SchemaError", "render"]

"""Numerical verification engine for a graded modular-double construction."""

from .params import ParameterContext, make_context

__all__ = ["ParameterContext", "make_context"]

__version__ = "0.1.0"

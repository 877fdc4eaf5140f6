"""Exact construction and verification of polynomial vector fields with
prescribed invariant algebraic curves."""

from .ratpoly import MPoly, VariableMismatch, div_exact, divmod_poly, evaluate, partial, substitute, to_str
from .brackets import VectorField, bracket2, bracketN, directional

__all__ = [
    "MPoly", "VariableMismatch", "div_exact", "divmod_poly", "evaluate", "partial",
    "substitute", "to_str", "VectorField", "bracket2", "bracketN", "directional",
]

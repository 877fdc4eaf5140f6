"""Jacobian brackets, directional derivatives and vector fields.

Bracket convention: ``{f, g} = f_x g_y - f_y g_x``, so ``{x, y} = 1``; the
N-ary bracket ``{f_1, ..., f_N}`` is the Jacobian determinant with row ``i``
holding the gradient of ``f_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .ratpoly import MPoly, VariableMismatch, partial


@dataclass(frozen=True)
class VectorField:
    """A polynomial vector field ``v = (v^1, ..., v^N)`` over named variables."""

    variables: tuple
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != len(self.variables):
            raise ValueError(
                f"{len(self.components)} components for {len(self.variables)} variables")
        for c in self.components:
            if not isinstance(c, MPoly):
                raise TypeError("components must be MPoly")
            if c.variables != self.variables:
                raise VariableMismatch(f"component over {c.variables}, field over {self.variables}")

    @classmethod
    def planar(cls, P: MPoly, Q: MPoly) -> "VectorField":
        return cls(P.variables, (P, Q))

    @property
    def dim(self) -> int:
        return len(self.variables)

    @property
    def degree(self) -> int:
        return max(c.degree() for c in self.components)

    @property
    def P(self) -> MPoly:
        return self.components[0]

    @property
    def Q(self) -> MPoly:
        return self.components[1]

    def scaled(self, c) -> "VectorField":
        return VectorField(self.variables, tuple(comp * c for comp in self.components))

    def __add__(self, other: "VectorField") -> "VectorField":
        if other.variables != self.variables:
            raise VariableMismatch("fields over different variables")
        return VectorField(self.variables, tuple(a + b for a, b in zip(self.components, other.components)))

    def __iter__(self):
        return iter(self.components)

    def __str__(self):
        return "; ".join(f"d{v}/dt = {c}" for v, c in zip(self.variables, self.components))


def bracket2(f: MPoly, g: MPoly) -> MPoly:
    """Planar bracket ``{f, g} = f_x g_y - f_y g_x``."""
    if len(f.variables) != 2:
        raise ValueError("bracket2 needs bivariate polynomials")
    if f.variables != g.variables:
        raise VariableMismatch(f"{f.variables} vs {g.variables}")
    x, y = f.variables
    return partial(f, x) * partial(g, y) - partial(f, y) * partial(g, x)


def _det(m: list) -> MPoly:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    # cofactor expansion along the last row
    last = n - 1
    total = None
    for j in range(n):
        entry = m[last][j]
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[:last]]
        term = entry * _det(minor)
        if (last + j) % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else MPoly.zero(m[0][0].variables)


def bracketN(fs: Sequence[MPoly]) -> MPoly:
    """Jacobian determinant ``{f_1, ..., f_N}`` of N polynomials in N variables."""
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one polynomial")
    variables = fs[0].variables
    if len(fs) != len(variables):
        raise ValueError(f"{len(fs)} functions but {len(variables)} variables")
    for f in fs:
        if f.variables != variables:
            raise VariableMismatch("all arguments must share the variable list")
    jac = [[partial(f, v) for v in variables] for f in fs]
    return _det(jac)


def gradient(g: MPoly) -> tuple:
    return tuple(partial(g, v) for v in g.variables)


def directional(g: MPoly, v: VectorField) -> MPoly:
    """``dg(v) = sum_i v^i * dg/dx^i``."""
    if g.variables != v.variables:
        raise VariableMismatch(f"{g.variables} vs field over {v.variables}")
    total = MPoly.zero(v.variables)
    for var, comp in zip(v.variables, v.components):
        if not comp.is_zero():
            total = total + comp * partial(g, var)
    return total


def plucker_residual(fs: Sequence[MPoly], gs: Sequence[MPoly], G: MPoly) -> MPoly:
    """Alternating sum that vanishes identically for any arguments.

    With ``h = (g_1, ..., g_N, G)`` this is::

        sum_i (-1)^(N+1+i) {f_1..f_{N-1}, h_i} {h_1..^h_i..h_{N+1}}

    i.e. the expansion along the last column of the bordered determinant
    whose last column is a combination of the others.  For N = 2 it is the
    ternary identity ``{k,j}{i,m} + {k,m}{j,i} + {i,k}{j,m} = 0``.
    """
    fs, gs = list(fs), list(gs)
    n = len(gs)
    if len(fs) != n - 1:
        raise ValueError(f"need N-1 = {n - 1} f's, got {len(fs)}")
    if n != len(G.variables):
        raise ValueError(f"need N = {len(G.variables)} g's, got {n}")
    h = gs + [G]
    total = MPoly.zero(G.variables)
    for i in range(n + 1):
        left = bracketN(fs + [h[i]])
        if left.is_zero():
            continue
        right = bracketN(h[:i] + h[i + 1:])
        term = left * right
        # rows are 1-based in the sign rule; column index is N+1
        if (i + 1 + n + 1) % 2:
            term = -term
        total = total + term
    return total


def ternary_residual(gk: MPoly, gj: MPoly, gi: MPoly, gm: MPoly) -> MPoly:
    """Planar four-argument identity ``{k,j}{i,m} + {k,m}{j,i} + {i,k}{j,m}``."""
    return (bracket2(gk, gj) * bracket2(gi, gm)
            + bracket2(gk, gm) * bracket2(gj, gi)
            + bracket2(gi, gk) * bracket2(gj, gm))

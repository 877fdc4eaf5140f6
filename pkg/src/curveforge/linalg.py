"""Exact linear algebra over the rationals.

Matrices are lists of rows of Fractions.  Only what the invariance machinery
needs: reduced row echelon form, null spaces and affine solution sets.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple:
    """Reduced row echelon form.  Returns ``(matrix, pivot_columns)``."""
    m = [[Fraction(v) for v in row] for row in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(m):
            break
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [v / pv for v in m[r]]
        prow = m[r]
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f != 0:
                    row = m[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list:
    """Basis of ``{v : A v = 0}``, returned in reduced echelon form.

    Each basis vector has a 1 in one free column and 0 in the other free
    columns; the list is ordered so that the vectors read as the rows of an
    RREF matrix (leading free column first).
    """
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    if not basis:
        return []
    red_basis, _ = rref(basis, ncols)
    return red_basis


def solve_affine(rows: Sequence[Sequence], rhs: Sequence, ncols: int):
    """Solutions of ``A v = b`` as ``(particular, nullspace_basis)``.

    Returns ``None`` when the system is inconsistent.  The particular solution
    sets every free variable to zero.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    part = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        part[pc] = row[ncols]
    return part, nullspace(rows, ncols)


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])

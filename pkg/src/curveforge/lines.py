"""Search for invariant straight lines of a planar field.

The line ``y = K x + L`` is invariant iff ``Q(x, Kx+L) - K P(x, Kx+L)``
vanishes identically in ``x``.  Its coefficients in ``x`` are polynomials
in ``(K, L)``; they are formed exactly and solved in floating point.  The
top coefficient depends on ``K`` alone, which gives a univariate equation
for the slopes.  Vertical lines ``x = c`` are found from the common roots
of the y-coefficients of ``P``.

Each candidate is re-checked: exactly when both numbers rationalize to
something that passes, otherwise by the residual at sample points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .brackets import VectorField, directional
from .ratpoly import MPoly, div_exact, evaluate, substitute

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class InvariantLine:
    """``y = slope*x + intercept``, or ``x = intercept`` when ``vertical``."""

    slope: float
    intercept: float
    vertical: bool = False
    exact: bool = False
    residual: float = 0.0

    def as_pair(self) -> tuple:
        return (math.inf if self.vertical else self.slope, self.intercept)

    def __str__(self):
        if self.vertical:
            return f"x = {self.intercept:.12g}"
        return f"y = {self.slope:.12g}*x + {self.intercept:.12g}"


@dataclass
class LineReport:
    lines: list = field(default_factory=list)
    families: list = field(default_factory=list)

    @property
    def non_isolated(self) -> bool:
        return bool(self.families)

    def pairs(self) -> list:
        return [ln.as_pair() for ln in self.lines]


def _float_poly_in(p: MPoly, var_index: int, fixed: dict) -> np.ndarray:
    """Coefficients (highest first) of ``p`` as a polynomial in one variable,
    the others substituted by floats."""
    deg = p.degree(p.variables[var_index]) if not p.is_zero() else 0
    out = np.zeros(deg + 1)
    for e, c in p.items():
        t = float(c)
        for i, k in enumerate(e):
            if i != var_index and k:
                t *= fixed[i] ** k
        out[deg - e[var_index]] += t
    return out


def _real_roots(coeffs: np.ndarray, tol=1e-7) -> list:
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0:
        return None  # identically zero
    c = c / scale
    while c.size and abs(c[0]) < 1e-13:
        c = c[1:]
    if c.size <= 1:
        return []
    out = []
    for r in np.roots(c):
        if abs(r.imag) <= tol * max(1.0, abs(r.real)):
            x = float(r.real)
            if all(abs(x - o) > 1e-9 * max(1.0, abs(o)) for o in out):
                out.append(x)
    return out


def _newton_polish(polys, K, L, iters=8):
    # Gauss-Newton on the overdetermined system c_i(K, L) = 0
    grads = [(p.diff("K"), p.diff("L")) for p in polys]
    for _ in range(iters):
        r = np.array([float(evaluate(p, (K, L))) for p in polys])
        if not np.any(r):
            break
        J = np.array([[float(evaluate(a, (K, L))), float(evaluate(b, (K, L)))] for a, b in grads])
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        K, L = K + step[0], L + step[1]
        if abs(step[0]) + abs(step[1]) < 1e-16:
            break
    return K, L


def _sample_residual(v: VectorField, K: float, L: float, vertical: bool) -> float:
    xs = np.linspace(-2.0, 2.0, 20)
    worst = 0.0
    scale = 1.0
    for t in xs:
        if vertical:
            P = float(evaluate(v.P, (L, t)))
            worst = max(worst, abs(P))
        else:
            y = K * t + L
            P = float(evaluate(v.P, (t, y)))
            Q = float(evaluate(v.Q, (t, y)))
            worst = max(worst, abs(Q - K * P))
            scale = max(scale, abs(Q), abs(P))
    return worst / scale


def _exact_check(v: VectorField, ell: MPoly) -> bool:
    return div_exact(directional(ell, v), ell) is not None


def _certify(v, K, L, vertical):
    x, y = MPoly.gens(v.variables)
    fk = Fraction(K).limit_denominator(10**6) if not vertical else None
    fl = Fraction(L).limit_denominator(10**6)
    if (vertical or abs(float(fk) - K) < 1e-12) and abs(float(fl) - L) < 1e-12:
        ell = x - fl if vertical else y - x * fk - fl
        if _exact_check(v, ell):
            return InvariantLine(0.0 if vertical else float(fk), float(fl), vertical, True, 0.0)
    res = _sample_residual(v, K, L, vertical)
    if res < RESIDUAL_TOL:
        return InvariantLine(0.0 if vertical else K, L, vertical, False, res)
    return None


def _vertical_lines(v: VectorField, max_abs: float, report: LineReport):
    xname, yname = v.variables
    P = v.P
    if P.is_zero():
        report.families.append("every vertical line x = c is invariant (P = 0)")
        return
    # P(c, y) == 0 for all y: common roots of the y-coefficients
    coeff_polys = {}
    for (i, j), c in P.items():
        coeff_polys.setdefault(j, {})[(i,)] = c
    polys = [MPoly((xname,), t) for t in coeff_polys.values()]
    polys.sort(key=lambda p: p.degree())
    base = polys[0]
    if base.degree() <= 0:
        return
    roots = _real_roots(_float_poly_in(base, 0, {}))
    for c in roots or []:
        if abs(c) > max_abs:
            continue
        if all(abs(float(evaluate(p, (c,)))) <= 1e-8 * max(1.0, max(abs(float(q)) for _, q in p.items()))
               for p in polys[1:]):
            line = _certify(v, 0.0, c, True)
            if line is not None:
                report.lines.append(line)


def _lines_at_slope(v: VectorField, polys: list, k: float, max_abs: float, report: LineReport):
    if abs(k) > max_abs + 1e-9:
        return
    rest = [_float_poly_in(p, 1, {0: k}) for p in polys]
    rest = [r for r in rest if np.max(np.abs(r)) > 1e-9 * max(1.0, np.max(np.abs(r)))]
    nontriv = [r for r in rest if np.trim_zeros(r, "f").size > 1]
    consts = [r for r in rest if np.trim_zeros(r, "f").size == 1]
    if consts and any(abs(r[-1]) > 1e-8 for r in consts):
        return
    if not nontriv:
        report.families.append(f"slope K = {k:.12g}: every intercept L is invariant")
        return
    anchor = min(nontriv, key=lambda r: np.trim_zeros(r, "f").size)
    for l in _real_roots(anchor) or []:
        kk, ll = _newton_polish(polys, k, l)
        if abs(ll) > max_abs + 1e-9:
            continue
        line = _certify(v, kk, ll, False)
        if line is not None:
            report.lines.append(line)


def _resultant_in_L(p: MPoly, q: MPoly) -> MPoly:
    """Resultant of two polynomials in ``(K, L)`` with respect to ``L``.

    Sylvester determinant over Q[K], by fraction-free (Bareiss) elimination.
    """
    ring = ("K",)

    def coeffs(f):
        deg = f.degree("L")
        out = [dict() for _ in range(deg + 1)]
        for (k, l), c in f.items():
            out[deg - l][(k,)] = c
        return [MPoly(ring, t) for t in out]

    a, b = coeffs(p), coeffs(q)
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    if size == 0:
        return MPoly.const(1, ring)
    zero = MPoly.zero(ring)
    M = [[zero] * i + a + [zero] * (size - m - 1 - i) for i in range(n)]
    M += [[zero] * i + b + [zero] * (size - n - 1 - i) for i in range(m)]
    sign, prev = 1, MPoly.const(1, ring)
    for k in range(size - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, size) if not M[i][k].is_zero()), None)
            if swap is None:
                return zero
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                M[i][j] = div_exact(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev)
        prev = M[k][k]
    return M[-1][-1] * sign


def invariant_lines(v: VectorField, max_abs) -> LineReport:
    """All real invariant lines with ``|K|, |L| <= max_abs`` (vertical lines
    ``x = c`` with ``|c| <= max_abs`` included, reported with slope ``inf``).

    One-parameter families of invariant lines are reported in
    ``families`` rather than enumerated.
    """
    if v.dim != 2:
        raise ValueError("invariant_lines needs a planar field")
    max_abs = float(max_abs)
    report = LineReport()
    xname, yname = v.variables
    X = MPoly.var(xname, (xname, "K", "L"))
    K = MPoly.var("K", (xname, "K", "L"))
    L = MPoly.var("L", (xname, "K", "L"))
    Ps = substitute(v.P, yname, X * K + L)
    Qs = substitute(v.Q, yname, X * K + L)
    cond = Qs - K * Ps
    by_power = {}
    for (i, k, l), c in cond.items():
        by_power.setdefault(i, {})[(k, l)] = c
    polys = [MPoly(("K", "L"), t) for _, t in sorted(by_power.items())]
    if not polys:
        report.families.append("every non-vertical line is invariant")
    else:
        k_only = [p for p in polys if p.degree("L") == 0]
        l_only = [p for p in polys if p.degree("K") == 0]
        if k_only:
            base = min(k_only, key=lambda p: p.degree())
            for k in _real_roots(_float_poly_in(base, 0, {})) or []:
                _lines_at_slope(v, polys, k, max_abs, report)
        elif l_only:
            base = min(l_only, key=lambda p: p.degree())
            for l in _real_roots(_float_poly_in(base, 1, {})) or []:
                rest = [_float_poly_in(p, 0, {1: l}) for p in polys]
                if all(np.max(np.abs(r)) < 1e-9 for r in rest):
                    report.families.append(f"intercept L = {l:.12g}: every slope K is invariant")
                    continue
                anchor = min((r for r in rest if np.max(np.abs(r)) >= 1e-9),
                             key=lambda r: np.trim_zeros(r, "f").size)
                for k in _real_roots(anchor) or []:
                    kk, ll = _newton_polish(polys, k, l)
                    if abs(kk) > max_abs + 1e-9 or abs(ll) > max_abs + 1e-9:
                        continue
                    line = _certify(v, kk, ll, False)
                    if line is not None:
                        report.lines.append(line)
        else:
            # every condition involves both unknowns (e.g. a radial top part):
            # eliminate L with a resultant
            first, *others = sorted(polys, key=lambda p: (p.degree(), len(p)))
            res = next((r for r in (_resultant_in_L(first, q) for q in others) if not r.is_zero()), None)
            if res is None:
                report.families.append(f"the conditions share the factor curve {first} = 0 in (K, L)")
            else:
                for k in _real_roots(_float_poly_in(res, 0, {})) or []:
                    _lines_at_slope(v, polys, k, max_abs, report)
    _vertical_lines(v, max_abs, report)
    uniq = []
    for ln in sorted(report.lines, key=lambda t: (t.vertical, t.slope, t.intercept)):
        if not any(u.vertical == ln.vertical and abs(u.slope - ln.slope) < 1e-8
                   and abs(u.intercept - ln.intercept) < 1e-8 for u in uniq):
            uniq.append(ln)
    report.lines = uniq
    return report

"""Invariance checks: cofactors, chains, Darboux exponents and curve search.

A polynomial ``g`` is invariant under ``v`` when ``dg(v) = K g`` for some
polynomial cofactor ``K``.  Everything here is exact; floating point only
appears in :func:`find_invariant_curve` to *propose* candidate cofactors,
each of which is rationalized and then certified exactly before use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .brackets import VectorField, directional
from .linalg import nullspace, solve_affine
from .ratpoly import MPoly, div_exact, divmod_poly, monomials


INVARIANT = "invariant"
NOT_INVARIANT = "not_invariant"


@dataclass(frozen=True)
class InvariantReport:
    curve: MPoly
    cofactor: MPoly | None
    remainder: MPoly
    verdict: str

    @property
    def invariant(self) -> bool:
        return self.verdict == INVARIANT


@dataclass(frozen=True)
class DarbouxCertificate:
    """Exponents ``sigma`` with ``sum sigma_j K_j`` stored as ``residual``."""

    exponents: tuple
    residual: MPoly

    @property
    def valid(self) -> bool:
        return self.residual.is_zero()


@dataclass(frozen=True)
class ChainSpec:
    members: tuple
    cofactors: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "cofactors", tuple(self.cofactors))
        if len(self.members) != len(self.cofactors):
            raise ValueError(f"{len(self.members)} members but {len(self.cofactors)} cofactors")
        if not self.members:
            raise ValueError("empty chain")
        if self.members[0].is_zero():
            raise ValueError("first chain member must be nonzero")


class NotInvariantError(ValueError):
    def __init__(self, index: int, report: InvariantReport):
        super().__init__(f"curve {index} is not invariant; remainder {report.remainder}")
        self.index = index
        self.report = report


def cofactor(g: MPoly, v: VectorField) -> InvariantReport:
    if g.is_zero():
        raise ValueError("the zero polynomial has no cofactor")
    dg = directional(g, v)
    q, r = divmod_poly(dg, g)
    if r.is_zero():
        return InvariantReport(g, q, r, INVARIANT)
    return InvariantReport(g, None, r, NOT_INVARIANT)


def check_chain(spec: ChainSpec, v: VectorField) -> list:
    """Residuals ``X(f_i) - sum_{j<=i} f_{i-j} L_j``; all zero for a valid chain."""
    out = []
    for i, f in enumerate(spec.members):
        res = directional(f, v)
        for j in range(i + 1):
            res = res - spec.members[i - j] * spec.cofactors[j]
        out.append(res)
    return out


# coefficient vectors

def _from_vector(vec: Sequence, basis: Sequence, variables) -> MPoly:
    return MPoly(variables, {m: c for m, c in zip(basis, vec) if c})


def darboux_search(curves: Sequence[MPoly], v: VectorField) -> list:
    """Basis of exponent vectors ``sigma`` with ``sum sigma_j K_j = 0``.

    Raises :class:`NotInvariantError` if some curve is not invariant.
    """
    curves = list(curves)
    Ks = []
    for i, g in enumerate(curves):
        rep = cofactor(g, v)
        if not rep.invariant:
            raise NotInvariantError(i, rep)
        Ks.append(rep.cofactor)
    basis = sorted({m for K in Ks for m, _ in K.items()}, key=lambda e: (sum(e), e), reverse=True)
    rows = [[K.coeff(m) for K in Ks] for m in basis]
    certs = []
    for sigma in nullspace(rows, len(Ks)):
        resid = MPoly.zero(v.variables)
        for s, K in zip(sigma, Ks):
            resid = resid + K * s
        certs.append(DarbouxCertificate(tuple(sigma), resid))
    return certs


def log_derivative_residual(curves: Sequence[MPoly], sigma: Sequence, v: VectorField) -> MPoly:
    """Numerator of ``d/dt log prod g_j^sigma_j`` over the common denominator.

    ``sum_j sigma_j dg_j(v) prod_{m != j} g_m``; zero exactly when the product
    is a first integral.
    """
    total = MPoly.zero(v.variables)
    for j, (g, s) in enumerate(zip(curves, sigma)):
        if not s:
            continue
        term = directional(g, v) * Fraction(s)
        for m, h in enumerate(curves):
            if m != j:
                term = term * h
        total = total + term
    return total


# curve search

def curves_with_cofactor(v: VectorField, K: MPoly, deg_g: int) -> list:
    """Basis (reduced echelon, leading coefficient 1) of all ``g`` of degree
    at most ``deg_g`` with ``dg(v) = K g``.  Constants are included when K = 0."""
    variables = v.variables
    gbasis = monomials(len(variables), deg_g)
    cols = []
    for m in gbasis:
        mono = MPoly.monomial(m, variables)
        cols.append(directional(mono, v) - K * mono)
    rowset = sorted({e for c in cols for e, _ in c.items()}, reverse=True)
    rows = [[c.coeff(e) for c in cols] for e in rowset]
    return [_from_vector(vec, gbasis, variables) for vec in nullspace(rows, len(gbasis))]


def _homog_coeffs(h: MPoly, deg: int) -> list:
    # coefficients of a bivariate form, from x^deg down to y^deg
    return [h.coeff((deg - i, i)) for i in range(deg + 1)]


def _upoly_rem(a: list, b: list) -> list:
    # remainder of univariate polynomials, coefficients highest power first
    a = list(a)
    while len(a) >= len(b):
        q = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= q * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def _upoly_quo(a: list, b: list) -> list:
    a, q = list(a), []
    while len(a) >= len(b):
        c = a[0] / b[0]
        q.append(c)
        for i in range(len(b)):
            a[i] -= c * b[i]
        a.pop(0)
    return q


def _squarefree(coeffs: list) -> list:
    """``p / gcd(p, p')`` over Q, coefficients highest power first."""
    p = [Fraction(c) for c in coeffs]
    if len(p) <= 2:
        return p
    dp = [c * (len(p) - 1 - i) for i, c in enumerate(p[:-1])]
    a, b = p, dp
    while b:
        a, b = b, _upoly_rem(a, b)
    return _upoly_quo(p, a) if len(a) > 1 else p


def _direction_cofactors(Pn: MPoly, Qn: MPoly, n: int):
    """Invariant lines through the origin of the top-degree part.

    Returns a list of numeric cofactor vectors (complex, length n, monomials
    x^(n-1) .. y^(n-1)), one per distinct direction, or ``None`` when the top
    part is radial.
    """
    x, y = MPoly.gens(Pn.variables)
    h = x * Qn - y * Pn
    if h.is_zero():
        return None
    # h(1, t) as a polynomial in t; missing top degree means x divides h
    exact = list(reversed(_homog_coeffs(h, n + 1)))  # highest t power first
    while exact and exact[0] == 0:
        exact.pop(0)
    vertical = len(exact) - 1 < n + 1
    # repeated directions would come back from np.roots only to ~sqrt(eps)
    ht = [float(c) for c in _squarefree(exact)]
    out = []
    roots = np.roots(ht) if len(ht) > 1 else np.array([])
    distinct = []
    for r in roots:
        if all(abs(r - d) > 1e-6 * max(1.0, abs(d)) for d in distinct):
            distinct.append(r)
    Pc = np.array([complex(c) for c in _homog_coeffs(Pn, n)])
    Qc = np.array([complex(c) for c in _homog_coeffs(Qn, n)])
    for m in distinct:
        # K_l = (Qn - m Pn) / (y - m x) on the line y = m x, as a form of degree n-1
        num = Qc - m * Pc  # coefficients of t^0..t^n in (Q - mP)(1, t)
        quot, _ = np.polydiv(num[::-1], np.array([1.0, -m]))
        quot = np.asarray(quot)[::-1]
        vec = np.zeros(n, dtype=complex)
        vec[: len(quot)] = quot[:n]
        out.append(vec)
    if vertical:
        # vertical direction x = 0: cofactor is Pn / x
        q = div_exact(Pn, x)
        out.append(np.array([complex(c) for c in _homog_coeffs(q, n - 1)]))
    return out


def _rationalize(z: complex, tol: float = 1e-7, max_den: int = 10**6):
    if abs(z.imag) > tol * max(1.0, abs(z.real)):
        return None
    f = Fraction(z.real).limit_denominator(max_den)
    if abs(float(f) - z.real) > tol * max(1.0, abs(z.real)):
        return None
    return f


def _top_kernel(v: VectorField, Ktop: MPoly, d: int) -> list:
    """Forms ``g_d`` of degree d with ``D_n g_d = K_top g_d``."""
    n = v.degree
    variables = v.variables
    top = VectorField(variables, tuple(c.homogeneous_part(n) for c in v.components))
    basis = monomials(2, d, d)
    cols = []
    for m in basis:
        mono = MPoly.monomial(m, variables)
        cols.append(directional(mono, top) - Ktop * mono)
    rowset = monomials(2, d + n - 1, d + n - 1)
    rows = [[c.coeff(e) for c in cols] for e in rowset]
    return [_from_vector(vec, basis, variables) for vec in nullspace(rows, len(basis))]


def _top_candidates(v: VectorField, d: int, deg_K: int) -> list:
    n = v.degree
    variables = v.variables
    x, y = MPoly.gens(variables)
    if deg_K < n - 1:
        return [MPoly.zero(variables)]
    Pn, Qn = v.P.homogeneous_part(n), v.Q.homogeneous_part(n)
    dirs = _direction_cofactors(Pn, Qn, n)
    if dirs is None:
        r = div_exact(Pn, x) if not Pn.is_zero() else div_exact(Qn, y)
        return [r * d]
    basis = monomials(2, n - 1, n - 1)
    seen, out = set(), []
    for combo in itertools.combinations_with_replacement(range(len(dirs)), d):
        vec = sum((dirs[i] for i in combo), np.zeros(n, dtype=complex))
        coeffs = [_rationalize(z) for z in vec]
        if any(c is None for c in coeffs):
            continue
        K = _from_vector(coeffs, basis, variables)
        if K in seen:
            continue
        seen.add(K)
        if _top_kernel(v, K, d):
            out.append(K)
    return out


def _lower_cofactor(v: VectorField, Ktop: MPoly, gd: MPoly, d: int, deg_K: int):
    """Fill in the lower homogeneous parts of K one degree at a time.

    Requires the top form ``g_d`` to be fixed.  Returns ``K`` or ``None``
    when the candidate is inconsistent; raises ``_Ambiguous`` if some lower
    part is not pinned down by the equations.
    """
    n = v.degree
    variables = v.variables
    K = Ktop
    for s in range(1, n):
        kdeg = n - 1 - s
        gmons = monomials(2, d - 1, max(d - s, 0))
        kmons = monomials(2, kdeg, kdeg) if kdeg <= deg_K else []
        targets = monomials(2, d + n - 2, d + n - 1 - s)
        cols = []
        for m in gmons:
            mono = MPoly.monomial(m, variables)
            cols.append(directional(mono, v) - K * mono)
        for m in kmons:
            cols.append(-(MPoly.monomial(m, variables) * gd))
        rhs_poly = -(directional(gd, v) - K * gd)
        rows = [[c.coeff(e) for c in cols] for e in targets]
        rhs = [rhs_poly.coeff(e) for e in targets]
        sol = solve_affine(rows, rhs, len(cols))
        if sol is None:
            return None
        part, null = sol
        nk = len(kmons)
        if nk and any(any(vec[len(gmons) + i] for i in range(nk)) for vec in null):
            raise _Ambiguous(K, s)
        if nk:
            K = K + _from_vector(part[len(gmons):], kmons, variables)
    return K


class _Ambiguous(Exception):
    def __init__(self, K, level):
        super().__init__(level)
        self.K = K
        self.level = level


def _constant_candidates(v: VectorField, Kpart: MPoly, d: int) -> list:
    """Values of the constant c such that ``dg(v) = (Kpart + c) g`` has a
    solution of degree d.  They are eigenvalues of the operator restricted to
    monomials of degree <= d, found numerically and returned as rationals."""
    variables = v.variables
    gbasis = monomials(2, d)
    idx = {m: i for i, m in enumerate(gbasis)}
    A = np.zeros((len(gbasis), len(gbasis)))
    for j, m in enumerate(gbasis):
        mono = MPoly.monomial(m, variables)
        col = directional(mono, v) - Kpart * mono
        for e, c in col.items():
            if e in idx:
                A[idx[e], j] = float(c)
    out = []
    for lam in np.linalg.eigvals(A):
        f = _rationalize(complex(lam), tol=1e-6, max_den=10**4)
        if f is not None and f not in out:
            out.append(f)
    return out


def _numeric_cofactors(v: VectorField, Ktop: MPoly, tops: Sequence[MPoly], d: int, deg_K: int,
                       starts: int = 40, iters: int = 60) -> list:
    """Candidate cofactors when the level-by-level elimination stalls.

    Unknowns are the weights of the top forms, the lower coefficients of g
    and the lower coefficients of K.  For fixed K the g part is a linear
    least-squares problem, so only K is iterated on (damped Gauss-Newton
    from seeded random starts, with deflation of roots already found).
    Only K is rationalized; the caller recovers g exactly.
    """
    n = v.degree
    variables = v.variables
    lower_g = monomials(2, d - 1)
    lower_k = monomials(2, min(deg_K, n - 2)) if n >= 2 else []
    gb = list(tops) + [MPoly.monomial(m, variables) for m in lower_g]
    kb = [MPoly.monomial(m, variables) for m in lower_k]
    targets = monomials(2, d + n - 1)
    idx = {m: i for i, m in enumerate(targets)}

    def vec(p: MPoly) -> np.ndarray:
        out = np.zeros(len(targets))
        for e, c in p.items():
            out[idx[e]] = float(c)
        return out

    cols = np.array([vec(directional(b, v) - Ktop * b) for b in gb]).T
    T = np.array([[vec(k * b) for b in gb] for k in kb]).reshape(len(kb), len(gb), len(targets))
    nt = len(tops)
    rng = np.random.default_rng(0)
    # g's coefficients live on the affine plane norm_row . c = 1
    norm_row = np.r_[rng.standard_normal(nt), np.zeros(len(gb) - nt)]
    base = norm_row / (norm_row @ norm_row)
    plane = np.linalg.svd(norm_row[None, :])[2][1:].T

    def inner(t):
        # g coefficients are linear once K is fixed: eliminate them by least squares
        A = cols - np.einsum("k,kbj->jb", t, T)
        AN = A @ plane
        z = np.linalg.lstsq(AN, -A @ base, rcond=None)[0]
        c = base + plane @ z
        return AN, c, A @ c

    if not kb:
        return [Ktop] if np.linalg.norm(inner(np.zeros(0))[2]) < 1e-9 else []

    def deflation(t, roots):
        # multiply the residual by prod(1 + 1/|t - t_i|^2) so known roots stop attracting
        m, grad = 1.0, np.zeros(len(t))
        for r in roots:
            d2 = max(float((t - r) @ (t - r)), 1e-300)
            m *= 1 + 1 / d2
            grad += -2 * (t - r) / (d2 * d2 + d2)
        return m, m * grad

    found, roots = [], []
    for _ in range(starts):
        t = rng.standard_normal(len(kb)) * 3
        mu = 1e-3
        AN, c, res = inner(t)
        m, _ = deflation(t, roots)
        for _ in range(iters):
            # Kaufman's variable-projection Jacobian, then the deflation product rule
            J = -np.einsum("b,kbj->jk", c, T)
            U = np.linalg.svd(AN, full_matrices=False)[0]
            J = J - U @ (U.T @ J)
            m, dm = deflation(t, roots)
            J = m * J + np.outer(res, dm)
            H = J.T @ J
            step = np.linalg.solve(H + mu * (np.diag(np.diag(H)) + 1e-12 * np.eye(len(kb))), -J.T @ (m * res))
            AN2, c2, res2 = inner(t + step)
            m2, _ = deflation(t + step, roots)
            if m2 * np.linalg.norm(res2) < m * np.linalg.norm(res):
                t, AN, c, res, mu = t + step, AN2, c2, res2, mu / 10
                if np.linalg.norm(step) < 1e-13 * (1 + np.linalg.norm(t)):
                    break
            else:
                mu *= 10
                if mu > 1e12:
                    break
        if np.linalg.norm(res) > 1e-9 * (1 + np.linalg.norm(c)):
            continue
        roots.append(t.copy())
        coeffs = [_rationalize(complex(z), tol=1e-7, max_den=10**4) for z in t]
        if any(z is None for z in coeffs):
            continue
        K = Ktop + _from_vector(coeffs, lower_k, variables)
        if K not in found:
            found.append(K)
    return found


def find_invariant_curve(v: VectorField, deg_g: int, deg_K: int | None = None) -> list:
    """Search for invariant curves of degree ``deg_g`` (exactly) with cofactor
    of degree at most ``deg_K`` (default ``deg(v) - 1``).

    Returns ``(g, K)`` pairs; ``g`` runs over a reduced echelon basis of the
    solution space for each cofactor found and is normalized to leading
    coefficient 1.  Every pair is re-certified with :func:`cofactor`.
    """
    if v.dim != 2:
        raise ValueError("find_invariant_curve handles planar fields only")
    if deg_g < 1:
        raise ValueError("deg_g must be at least 1")
    n = v.degree
    if deg_K is None:
        deg_K = n - 1
    if deg_K > n - 1:
        raise ValueError(f"cofactor degree is at most deg(v) - 1 = {n - 1}")
    variables = v.variables
    d = deg_g

    cofactors = []
    for Ktop in _top_candidates(v, d, deg_K):
        tops = _top_kernel(v, Ktop, d)
        if n == 1:
            cofactors.append(Ktop)
            continue
        K = None
        if len(tops) == 1:
            try:
                K = _lower_cofactor(v, Ktop, tops[0], d, deg_K)
            except _Ambiguous as amb:
                if amb.level != n - 1:
                    cofactors.extend(_numeric_cofactors(v, Ktop, tops, d, deg_K))
                    continue
                for c in _constant_candidates(v, amb.K, d):
                    cofactors.append(amb.K + c)
                continue
            if K is not None:
                cofactors.append(K)
        elif n == 2 or deg_K == 0:
            for c in _constant_candidates(v, Ktop if deg_K > 0 else MPoly.zero(variables), d):
                cofactors.append((Ktop if deg_K > 0 else MPoly.zero(variables)) + c)
        else:
            cofactors.extend(_numeric_cofactors(v, Ktop, tops, d, deg_K))

    results = []
    seen = set()
    for K in cofactors:
        if K.degree() > deg_K:
            continue
        for g in curves_with_cofactor(v, K, d):
            if g.is_constant() or g.degree() != d:
                continue
            g = g.monic()
            if g in seen:
                continue
            rep = cofactor(g, v)
            if rep.invariant and rep.cofactor == K:
                seen.add(g)
                results.append((g, K))
    return results


# degree structure

@dataclass(frozen=True)
class DegreeReport:
    S: int
    coefficient_degrees: tuple
    bounds: tuple
    branch: str
    k: Fraction | None = None
    m: Fraction | None = None
    within_bounds: bool = field(default=True)


def _split_in_y(g: MPoly) -> list:
    # a_j(x) such that g = sum_j a_j(x) y^(S-j)
    S = g.degree(g.variables[1])
    parts = [dict() for _ in range(S + 1)]
    for (i, j), c in g.items():
        parts[S - j][(i, 0)] = c
    return [MPoly(g.variables, p) for p in parts]


def verify_degree_structure(g: MPoly, v: VectorField) -> DegreeReport:
    """Compare ``deg a_j`` in ``g = sum a_j(x) y^(S-j)`` with the bound implied
    by the leading y-structure of a quadratic field.

    The field must have ``P = p0 y^2 + p1(x) y + p2(x)`` and similarly for Q
    with constant ``p0, q0``.  If ``p0 != 0`` the bound is ``deg a_j <= j``.
    If ``p0 = 0`` and ``P`` has an ``xy`` term ``p11``, with ``k = q0/p11``
    and ``m = alpha0/p11 - S k`` (``alpha0`` the y-coefficient of the
    cofactor) the bound is ``deg a_j <= k j + m``.
    """
    if v.dim != 2:
        raise ValueError("planar fields only")
    xname, yname = v.variables
    for comp in v.components:
        if comp.degree(yname) > 2:
            raise ValueError("field is not quadratic in y")
        if any(j == 2 and i > 0 for (i, j) in comp.terms):
            raise ValueError("y^2 coefficients must be constant")
    p0 = v.P.coeff((0, 2))
    q0 = v.Q.coeff((0, 2))
    p11 = v.P.coeff((1, 1))
    S = g.degree(yname)
    a = _split_in_y(g)
    degs = tuple(p.degree() for p in a)
    if p0 != 0:
        bounds = tuple(Fraction(j) for j in range(S + 1))
        branch, k, m = "p0", None, None
    elif p11 != 0:
        rep = cofactor(g, v)
        if not rep.invariant:
            raise ValueError("curve is not invariant under the field")
        alpha0 = rep.cofactor.coeff((0, 1))
        k = Fraction(q0) / p11
        m = Fraction(alpha0) / p11 - S * k
        bounds = tuple(k * j + m for j in range(S + 1))
        branch = "p11"
    else:
        raise ValueError("neither p0 nor p11 is nonzero; no bound applies")
    ok = all(dj <= b for dj, b in zip(degs, bounds))
    return DegreeReport(S, degs, bounds, branch, k, m, ok)


def fields_with_curve(g: MPoly, n: int, K: MPoly | None = None) -> list:
    """All planar fields of degree at most ``n`` leaving ``g`` invariant.

    ``dg(v) = K g`` is linear in the coefficients of ``(P, Q, K)`` jointly, so
    the solutions form a vector space; a reduced echelon basis is returned as
    ``(VectorField, cofactor)`` pairs.  If ``K`` is given, the cofactor is
    restricted to the line ``t K`` and each basis element carries its own ``t K``.
    """
    variables = g.variables
    if len(variables) != 2:
        raise ValueError("planar curves only")
    x, y = variables
    gx, gy = g.diff(x), g.diff(y)
    fb = monomials(2, n)
    kb = monomials(2, n - 1) if K is None else [None]
    cols = []
    for m in fb:
        cols.append(MPoly.monomial(m, variables) * gx)
    for m in fb:
        cols.append(MPoly.monomial(m, variables) * gy)
    for m in kb:
        base = MPoly.monomial(m, variables) if m is not None else K
        cols.append(-(base * g))
    rowset = sorted({e for c in cols for e, _ in c.items()}, reverse=True)
    rows = [[c.coeff(e) for c in cols] for e in rowset]
    out = []
    nf = len(fb)
    for vec in nullspace(rows, len(cols)):
        P = _from_vector(vec[:nf], fb, variables)
        Q = _from_vector(vec[nf:2 * nf], fb, variables)
        if K is None:
            Kv = _from_vector(vec[2 * nf:], kb, variables)
        else:
            Kv = K * vec[2 * nf]
        out.append((VectorField(variables, (P, Q)), Kv))
    return out

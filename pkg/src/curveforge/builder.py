"""Inverse constructions: vector fields with prescribed invariant curves.

Every constructor returns a polynomial field; divisions by a curve are
realized by multiplying through by the remaining curves, so nothing here
ever holds a rational function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .brackets import VectorField, bracket2, bracketN
from .lines import InvariantLine, LineReport, invariant_lines  # noqa: F401  (construction-side API)
from .ratpoly import MPoly, VariableMismatch, partial


@dataclass(frozen=True)
class CurveSet:
    curves: tuple
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.curves:
            raise ValueError("empty curve set")
        vs = self.curves[0].variables
        for g in self.curves:
            if g.is_zero():
                raise ValueError("curves must be nonzero")
            if g.variables != vs:
                raise VariableMismatch("curves must share the variable list")
        if self.labels and len(self.labels) != len(self.curves):
            raise ValueError("one label per curve")

    @property
    def variables(self) -> tuple:
        return self.curves[0].variables

    def __len__(self):
        return len(self.curves)

    def __iter__(self):
        return iter(self.curves)

    def product(self) -> MPoly:
        out = MPoly.const(1, self.variables)
        for g in self.curves:
            out = out * g
        return out


@dataclass(frozen=True)
class MultiplierSet:
    """Multipliers for each curve plus the two planar extras."""

    lambdas: tuple
    extra: tuple = (None, None)

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(self.lambdas))
        object.__setattr__(self, "extra", tuple(self.extra))
        if len(self.extra) != 2:
            raise ValueError("extra must be a pair")


@dataclass(frozen=True)
class CircleSpec:
    centers: tuple
    radii: tuple

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple((Fraction(a), Fraction(b)) for a, b in self.centers))
        object.__setattr__(self, "radii", tuple(Fraction(r) for r in self.radii))
        if len(self.centers) != len(self.radii):
            raise ValueError("one radius per center")
        if not self.radii:
            raise ValueError("need at least one circle")
        if any(r <= 0 for r in self.radii):
            raise ValueError("radii must be positive")

    def curves(self, variables=("x", "y")) -> CurveSet:
        x, y = MPoly.gens(variables)
        return CurveSet(tuple((x - a) ** 2 + (y - b) ** 2 - r * r
                              for (a, b), r in zip(self.centers, self.radii)))


def _as_poly(p, variables) -> MPoly:
    if p is None:
        return MPoly.zero(variables)
    if isinstance(p, MPoly):
        if p.variables != variables:
            raise VariableMismatch(f"multiplier over {p.variables}, curves over {variables}")
        return p
    return MPoly.const(p, variables)


def _others(curves: Sequence[MPoly], j: int) -> MPoly:
    out = MPoly.const(1, curves[0].variables)
    for m, g in enumerate(curves):
        if m != j:
            out = out * g
    return out


def build_planar(curves: CurveSet, mult: MultiplierSet) -> VectorField:
    """The general planar field with the given invariant curves.

    ``P = sum_j l_j {g_j, x} prod_{m!=j} g_m + l_{S+2} g``,
    ``Q = sum_j l_j {g_j, y} prod_{m!=j} g_m - l_{S+1} g`` with ``g`` the
    product of all curves.
    """
    if not isinstance(curves, CurveSet):
        curves = CurveSet(tuple(curves))
    variables = curves.variables
    if len(variables) != 2:
        raise ValueError("build_planar needs planar curves")
    gs = list(curves)
    if len(mult.lambdas) != len(gs):
        raise ValueError(f"{len(mult.lambdas)} multipliers for {len(gs)} curves")
    x, y = MPoly.gens(variables)
    P = MPoly.zero(variables)
    Q = MPoly.zero(variables)
    for j, (g, lam) in enumerate(zip(gs, mult.lambdas)):
        lam = _as_poly(lam, variables)
        if lam.is_zero():
            continue
        rest = _others(gs, j)
        P = P + lam * bracket2(g, x) * rest
        Q = Q + lam * bracket2(g, y) * rest
    l1, l2 = (_as_poly(e, variables) for e in mult.extra)
    if not (l1.is_zero() and l2.is_zero()):
        g = curves.product()
        P = P + l2 * g
        Q = Q - l1 * g
    return VectorField(variables, (P, Q))


def build_ndim(curves: Sequence[MPoly], phis: Sequence) -> VectorField:
    """Field with ``dg_k(v) = Phi_k * {g_1, ..., g_N}`` for N curves in N variables.

    Component ``j`` is ``sum_k Phi_k {g_1, .., x^j (slot k), .., g_N}``; this is
    the determinant formula with the global ``1/{g_1..g_N}`` factor cleared.
    """
    curves = list(curves)
    if not curves:
        raise ValueError("need N curves")
    variables = curves[0].variables
    N = len(variables)
    if len(curves) != N or len(phis) != N:
        raise ValueError(f"need exactly {N} curves and {N} functions")
    phis = [_as_poly(p, variables) for p in phis]
    if bracketN(curves).is_zero():
        raise ValueError("degenerate bracket: the curves are functionally dependent")
    coords = MPoly.gens(variables)
    comps = []
    for xj in coords:
        total = MPoly.zero(variables)
        for k, phi in enumerate(phis):
            if phi.is_zero():
                continue
            args = curves[:k] + [xj] + curves[k + 1:]
            total = total + phi * bracketN(args)
        comps.append(total)
    return VectorField(variables, tuple(comps))


def multiplier_field(curves: CurveSet, lambdas: dict) -> VectorField:
    """General-N multiplier construction.

    ``lambdas`` maps index tuples ``alpha`` (N-1 distinct curve indices) to
    polynomial multipliers; component ``j`` is
    ``sum_alpha l_alpha prod_{m not in alpha} g_m {g_alpha..., x^j}``.
    Each curve divides its own derivative along the result.
    """
    gs = list(curves)
    variables = curves.variables
    N = len(variables)
    coords = MPoly.gens(variables)
    comps = [MPoly.zero(variables) for _ in range(N)]
    for alpha, lam in lambdas.items():
        alpha = tuple(alpha)
        if len(alpha) != N - 1 or len(set(alpha)) != N - 1:
            raise ValueError(f"index tuple {alpha} must have {N - 1} distinct entries")
        lam = _as_poly(lam, variables)
        if lam.is_zero():
            continue
        rest = MPoly.const(1, variables)
        for m, g in enumerate(gs):
            if m not in alpha:
                rest = rest * g
        sel = [gs[i] for i in alpha]
        for j, xj in enumerate(coords):
            comps[j] = comps[j] + lam * rest * bracketN(sel + [xj])
    return VectorField(variables, tuple(comps))


def planar_phis(curves: Sequence[MPoly], lambdas: Sequence) -> list:
    """The functions ``Phi_m = sum_j l_j {g_j, g_m} prod_{k!=j} g_k`` for two curves."""
    curves = list(curves)
    variables = curves[0].variables
    out = []
    for gm in curves:
        total = MPoly.zero(variables)
        for j, (gj, lam) in enumerate(zip(curves, lambdas)):
            total = total + _as_poly(lam, variables) * bracket2(gj, gm) * _others(curves, j)
        out.append(total)
    return out


def corollary_degree_bound(spec: CircleSpec, mult: MultiplierSet) -> int:
    """Degree bound for the circle system: ``2S-1+S1`` if the multipliers do
    not sum to zero, else ``2S-2+S2``."""
    variables = ("x", "y")
    lams = [_as_poly(l, variables) for l in mult.lambdas]
    S = len(lams)
    total = sum(lams, MPoly.zero(variables))
    if not total.is_zero():
        return 2 * S - 1 + total.degree()
    sa = sum((l * a for l, (a, _) in zip(lams, spec.centers)), MPoly.zero(variables))
    sb = sum((l * b for l, (_, b) in zip(lams, spec.centers)), MPoly.zero(variables))
    return 2 * S - 2 + max(sa.degree(), sb.degree(), 0)


def circle_degree_bound(spec: CircleSpec, mult: MultiplierSet) -> int:
    """A bound that also covers cancellation among the top terms of the multipliers.

    Each term has degree at most ``2(S-1) + 1 + deg l_j``; the corollary bound
    assumes the top parts of the multipliers do not cancel, so the larger of
    the two is the one that always holds.
    """
    variables = ("x", "y")
    degs = [_as_poly(l, variables).degree() for l in mult.lambdas]
    S = len(degs)
    return max(corollary_degree_bound(spec, mult), 2 * S - 1 + max(degs))


@dataclass(frozen=True)
class CircleSystem:
    field: VectorField
    degree: int
    bound: int
    corollary_bound: int


def build_circles(spec: CircleSpec, mult: MultiplierSet, variables=("x", "y")) -> CircleSystem:
    """``P = -sum l_j (y-b_j) prod_{m!=j} g_m``, ``Q = sum l_j (x-a_j) prod_{m!=j} g_m``."""
    curves = list(spec.curves(variables))
    if len(mult.lambdas) != len(curves):
        raise ValueError(f"{len(mult.lambdas)} multipliers for {len(curves)} circles")
    x, y = MPoly.gens(variables)
    P = MPoly.zero(variables)
    Q = MPoly.zero(variables)
    for j, ((a, b), lam) in enumerate(zip(spec.centers, mult.lambdas)):
        lam = _as_poly(lam, variables)
        rest = _others(curves, j)
        P = P - lam * (y - b) * rest
        Q = Q + lam * (x - a) * rest
    v = VectorField(variables, (P, Q))
    cb = corollary_degree_bound(spec, mult)
    bound = circle_degree_bound(spec, mult)
    deg = v.degree
    if deg > bound:
        raise AssertionError(f"circle system degree {deg} exceeds bound {bound}")
    return CircleSystem(v, deg, bound, cb)


def two_nest_polys(l: int, a, radii: Sequence, variables=("x", "y")) -> tuple:
    """``(F_0, F_a)`` with ``F_a = (x+y-a) prod((x-a)^2+y^2-r_j^2)``."""
    a = Fraction(a)
    x, y = MPoly.gens(variables)

    def F(shift):
        out = x + y - shift
        for r in radii:
            out = out * ((x - shift) ** 2 + y ** 2 - Fraction(r) ** 2)
        return out

    return F(Fraction(0)), F(a)


def build_two_nests(l: int, a, radii: Sequence, variables=("x", "y")) -> VectorField:
    """Two nests of ``l`` circles centred at the origin and at ``(a, 0)``.

    ``P = (F_0 - F_a) y``, ``Q = -(F_0 - F_a) x + a F_0``.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    radii = [Fraction(r) for r in radii]
    if len(radii) != l:
        raise ValueError(f"need {l} radii, got {len(radii)}")
    if any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    x, y = MPoly.gens(variables)
    F0, Fa = two_nest_polys(l, a, radii, variables)
    D = F0 - Fa
    return VectorField(variables, (D * y, -(D * x) + F0 * Fraction(a)))


def two_nest_circles(a, radii: Sequence, variables=("x", "y")) -> list:
    x, y = MPoly.gens(variables)
    a = Fraction(a)
    out = [x ** 2 + y ** 2 - Fraction(r) ** 2 for r in radii]
    out += [(x - a) ** 2 + y ** 2 - Fraction(r) ** 2 for r in radii]
    return out


def antiderivative(p: MPoly, var: str) -> MPoly:
    """Formal antiderivative with zero constant of integration."""
    i = p.variables.index(var)
    out = {}
    for e, c in p.items():
        ne = e[:i] + (e[i] + 1,) + e[i + 1:]
        out[ne] = c / (e[i] + 1)
    return MPoly(p.variables, out)


def separable_curve(f1: MPoly, f2: MPoly, g0=0) -> MPoly:
    """``g0 + int f1 dx + int f2 dy``; ``f1`` in x only, ``f2`` in y only."""
    if f1.is_zero() or f2.is_zero():
        raise ValueError("integrands must be nonzero")
    x, y = f1.variables
    if f1.degree(y) > 0 or f2.degree(x) > 0:
        raise ValueError("f1 must depend on x only and f2 on y only")
    return antiderivative(f1, x) + antiderivative(f2, y) + Fraction(g0)


def build_separable(f1: MPoly, f2: MPoly, line: Sequence, lam, g0=0) -> tuple:
    """``P = (Ax+By+C) g_y``, ``Q = -(Ax+By+C) g_x + lam g``; returns ``(field, g)``.

    The cofactor of ``g`` is ``lam * g_y``.
    """
    g = separable_curve(f1, f2, g0)
    variables = g.variables
    x, y = MPoly.gens(variables)
    A, B, C = (Fraction(c) for c in line)
    ell = x * A + y * B + C
    gx, gy = partial(g, variables[0]), partial(g, variables[1])
    v = VectorField(variables, (ell * gy, -(ell * gx) + g * Fraction(lam)))
    return v, g


def build_leading_term(G: MPoly, a, b, n: int) -> tuple:
    """``H = x^(n+1) + G``; ``P = (a+bxy) H_y``, ``Q = -(a+bxy) H_x + (n+1) b y H``.

    Returns ``(field, H)``.  The cofactor of ``H`` is ``(n+1) b y H_y``, which
    reduces to ``(n+1) b y`` when ``G`` is linear in y with unit slope.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if G.degree() > n - 1:
        raise ValueError(f"deg G = {G.degree()} exceeds n-1 = {n - 1}")
    variables = G.variables
    x, y = MPoly.gens(variables)
    H = x ** (n + 1) + G
    w = x * y * Fraction(b) + Fraction(a)
    Hx, Hy = partial(H, variables[0]), partial(H, variables[1])
    v = VectorField(variables, (w * Hy, -(w * Hx) + y * H * ((n + 1) * Fraction(b))))
    return v, H


def leading_term_cofactor(H: MPoly, b, n: int) -> MPoly:
    y = MPoly.var(H.variables[1], H.variables)
    return y * partial(H, H.variables[1]) * ((n + 1) * Fraction(b))


def combine(fields: Sequence, coeffs: Sequence) -> VectorField:
    """Linear combination of fields."""
    out = None
    for f, c in zip(fields, coeffs):
        term = f.scaled(Fraction(c))
        out = term if out is None else out + term
    if out is None:
        raise ValueError("nothing to combine")
    return out

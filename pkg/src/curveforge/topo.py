"""Numeric curve topology and closed-form bounds.

Oval counting uses marching squares on a sign grid; critical points come
from Newton refinement seeded on the same kind of grid.  Both are numeric
and only as good as the caller's window and resolution.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple
from fractions import Fraction
from typing import Sequence

import numpy as np

from .brackets import VectorField
from .ratpoly import MPoly, partial

SADDLE = "saddle"
NODE = "node"
FOCUS = "focus"
CENTER_OR_FOCUS = "center-or-focus"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Window:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    resolution: int = 256

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("empty window")
        if self.resolution < 16:
            raise ValueError("resolution must be at least 16")

    @classmethod
    def square(cls, half: float, resolution: int = 256) -> "Window":
        return cls(-half, half, -half, half, resolution)

    def axes(self):
        n = self.resolution
        return (np.linspace(self.x_min, self.x_max, n + 1),
                np.linspace(self.y_min, self.y_max, n + 1))


def grid_values(g: MPoly, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """``g`` on the grid; rows follow ``ys`` and columns ``xs``."""
    X, Y = np.meshgrid(np.asarray(xs, float), np.asarray(ys, float))
    out = np.zeros_like(X)
    xp, yp = {}, {}
    for (i, j), c in g.items():
        if i not in xp:
            xp[i] = X ** i
        if j not in yp:
            yp[j] = Y ** j
        out += float(c) * xp[i] * yp[j]
    return out


# marching squares

class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass
class ZeroSet:
    """Contour pieces of ``g = 0`` inside a window."""

    polylines: list   # list of (points Nx2 array, closed: bool, touches_boundary: bool)

    @property
    def closed_count(self) -> int:
        return sum(1 for _, closed, touch in self.polylines if closed and not touch)

    @property
    def boundary_count(self) -> int:
        return sum(1 for _, _, touch in self.polylines if touch)


def zero_set(g: MPoly, w: Window) -> ZeroSet:
    xs, ys = w.axes()
    G = grid_values(g, xs, ys)
    S = G >= 0
    n = w.resolution
    # vertices are crossed edges: ("h", i, j) between nodes (i,j),(i,j+1); ("v", i, j) between (i,j),(i+1,j)
    pts = {}

    def interp(a, b, ga, gb):
        t = ga / (ga - gb) if ga != gb else 0.5
        return a + t * (b - a)

    hi, hj = np.nonzero(S[:, :-1] != S[:, 1:])
    for i, j in zip(hi.tolist(), hj.tolist()):
        pts[("h", i, j)] = (interp(xs[j], xs[j + 1], G[i, j], G[i, j + 1]), ys[i])
    vi, vj = np.nonzero(S[:-1, :] != S[1:, :])
    for i, j in zip(vi.tolist(), vj.tolist()):
        pts[("v", i, j)] = (xs[j], interp(ys[i], ys[i + 1], G[i, j], G[i + 1, j]))

    adj = {k: [] for k in pts}
    cells = set()
    for kind, i, j in pts:
        if kind == "h":
            for ci in (i - 1, i):
                if 0 <= ci < n:
                    cells.add((ci, j))
        else:
            for cj in (j - 1, j):
                if 0 <= cj < n:
                    cells.add((i, cj))
    for ci, cj in cells:
        bottom, top = ("h", ci, cj), ("h", ci + 1, cj)
        left, right = ("v", ci, cj), ("v", ci, cj + 1)
        edges = [e for e in (bottom, right, top, left) if e in pts]
        if len(edges) == 2:
            a, b = edges
            adj[a].append(b)
            adj[b].append(a)
        elif len(edges) == 4:
            centre = (G[ci, cj] + G[ci, cj + 1] + G[ci + 1, cj] + G[ci + 1, cj + 1]) / 4
            # pair edges around the corner whose sign differs from the centre
            if S[ci, cj] == (centre >= 0):
                pairs = ((bottom, right), (top, left))
            else:
                pairs = ((bottom, left), (top, right))
            for a, b in pairs:
                adj[a].append(b)
                adj[b].append(a)

    def on_boundary(k):
        kind, i, j = k
        return (kind == "h" and (i == 0 or i == n)) or (kind == "v" and (j == 0 or j == n))

    seen = set()
    polylines = []
    # open chains first (start at degree-1 vertices), then cycles
    starts = [k for k in pts if len(adj[k]) == 1] + list(pts)
    for s in starts:
        if s in seen:
            continue
        chain = [s]
        seen.add(s)
        prev, cur = None, s
        while True:
            nxt = [k for k in adj[cur] if k != prev and k not in seen]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            seen.add(cur)
            chain.append(cur)
        closed = len(chain) > 2 and chain[0] in adj[chain[-1]]
        touch = any(on_boundary(k) for k in chain)
        arr = np.array([pts[k] for k in chain])
        if closed:
            arr = np.vstack([arr, arr[:1]])
        polylines.append((arr, closed, touch))
    return ZeroSet(polylines)


def count_ovals(g: MPoly, w: Window) -> int:
    """Closed components of ``g = 0`` lying strictly inside the window."""
    zs = zero_set(g, w)
    if zs.boundary_count:
        warnings.warn(f"{zs.boundary_count} contour piece(s) touch the window boundary; "
                      "they are not counted", RuntimeWarning, stacklevel=2)
    return zs.closed_count


def root_bound_window(g: MPoly, margin: float = 1.1, resolution: int = 512) -> Window:
    """Square window containing all bounded real components, from a Cauchy
    bound on the univariate restrictions ``g(x, c)`` and ``g(c, y)``.

    This is a heuristic: it bounds where the leading forms dominate, which
    suffices for curves whose top-degree part has no real linear factors.
    """
    d = g.degree()
    top = g.homogeneous_part(d)
    lead = min(abs(float(top.coeff((d, 0)))), abs(float(top.coeff((0, d))))) or 1.0
    rest = sum(abs(float(c)) for e, c in g.items() if sum(e) < d)
    R = 1.0 + (rest / lead) ** (1.0 / max(d - 1, 1))
    R = max(R, 1.0) * margin
    return Window(-R, R, -R, R, resolution)


# critical points

@dataclass(frozen=True)
class CriticalPoint:
    location: tuple
    trace: float
    det: float
    classification: str


def classify(trace: float, det: float, tol: float = 1e-9) -> str:
    if abs(det) <= tol:
        return DEGENERATE
    if det < 0:
        return SADDLE
    if abs(trace) <= tol:
        return CENTER_OR_FOCUS
    if trace * trace - 4 * det < 0:
        return FOCUS
    return NODE


def _jacobian(v: VectorField):
    xv, yv = v.variables
    return [[partial(v.P, xv), partial(v.P, yv)], [partial(v.Q, xv), partial(v.Q, yv)]]


def _eval(p: MPoly, x: float, y: float) -> float:
    return float(sum(float(c) * x ** i * y ** j for (i, j), c in p.items()))


def critical_points(v: VectorField, w: Window, dedup: float = 1e-8) -> list:
    """Zeros of the field inside the window, refined by Newton's method.

    Seeds are grid cells where both components change sign.
    """
    if v.dim != 2:
        raise ValueError("planar fields only")
    xs, ys = w.axes()
    Pg = grid_values(v.P, xs, ys) >= 0
    Qg = grid_values(v.Q, xs, ys) >= 0

    def changes(S):
        c = S[:-1, :-1].astype(int) + S[:-1, 1:] + S[1:, :-1] + S[1:, 1:]
        return (c > 0) & (c < 4)

    ci, cj = np.nonzero(changes(Pg) & changes(Qg))
    J = _jacobian(v)
    found = []
    scale = max(w.x_max - w.x_min, w.y_max - w.y_min)
    for i, j in zip(ci.tolist(), cj.tolist()):
        x = 0.5 * (xs[j] + xs[j + 1])
        y = 0.5 * (ys[i] + ys[i + 1])
        ok = False
        for _ in range(60):
            F = np.array([_eval(v.P, x, y), _eval(v.Q, x, y)])
            M = np.array([[_eval(J[0][0], x, y), _eval(J[0][1], x, y)],
                          [_eval(J[1][0], x, y), _eval(J[1][1], x, y)]])
            try:
                step = np.linalg.solve(M, -F)
            except np.linalg.LinAlgError:
                break
            x, y = x + step[0], y + step[1]
            if not (np.isfinite(x) and np.isfinite(y)) or abs(x) + abs(y) > 1e6 * scale:
                break
            # evaluation roundoff keeps the last steps near 1e-13, so stop well above that
            if abs(step[0]) + abs(step[1]) < 1e-11 * max(1.0, abs(x) + abs(y)):
                ok = True
                break
        if not ok:
            continue
        if not (w.x_min - 1e-9 <= x <= w.x_max + 1e-9 and w.y_min - 1e-9 <= y <= w.y_max + 1e-9):
            continue
        if any(abs(x - p[0]) <= dedup and abs(y - p[1]) <= dedup for p in found):
            continue
        found.append((float(x), float(y)))
    out = []
    for x, y in sorted(found):
        a, b = _eval(J[0][0], x, y), _eval(J[0][1], x, y)
        c, d = _eval(J[1][0], x, y), _eval(J[1][1], x, y)
        tr, det = a + d, a * d - b * c
        tol = 1e-9 * max(1.0, abs(a), abs(b), abs(c), abs(d)) ** 2
        out.append(CriticalPoint((x, y), float(tr), float(det), classify(tr, det, tol)))
    return out


# two-nest Liapunov quantities

def liapunov_two_nests(l: int, a, radii: Sequence) -> tuple:
    """Exact trace and determinant of the linear part at ``(0,0)`` (equal to
    those at ``(a,0)``) and at ``(a/2, 0)``.

    With ``A = prod(a^2 - r_j^2)`` and ``B = (-1)^l prod r_j^2``:
    ``trace(0,0) = a B``, ``det(0,0) = a^2 A (A - B)``.  With
    ``h_j = (a/2)^2 - r_j^2``: ``trace(a/2,0) = a prod h_j`` and
    ``det(a/2,0) = -(a^4/2) prod h_j * sum_i prod_{j!=i} h_j``.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    a = Fraction(a)
    radii = [Fraction(r) for r in radii]
    if len(radii) != l:
        raise ValueError(f"need {l} radii")
    A = _prod(a * a - r * r for r in radii)
    B = (-1) ** l * _prod(r * r for r in radii)
    h = [a * a / 4 - r * r for r in radii]
    H = _prod(h)
    s = sum(_prod(h[j] for j in range(l) if j != i) for i in range(l))
    return (a * B, a * a * A * (A - B)), (a * H, -(a ** 4) / 2 * H * s)


def two_nest_discriminant(l: int, a, radii: Sequence) -> Fraction:
    """``trace^2 - 4 det`` at the origin: ``a^2((2A + B)^2 - 8A^2)``."""
    a = Fraction(a)
    radii = [Fraction(r) for r in radii]
    A = _prod(a * a - r * r for r in radii)
    B = (-1) ** l * _prod(r * r for r in radii)
    return a * a * ((2 * A + B) ** 2 - 8 * A * A)


def _prod(it):
    out = Fraction(1)
    for t in it:
        out *= t
    return out


# closed-form bounds

def _check_n(n: int):
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")


def harnack_bound(n: int) -> int:
    _check_n(n)
    return (n - 1) * (n - 2) // 2 + 1


class DegreeBounds(NamedTuple):
    lower: int
    upper: int


class LineBounds(NamedTuple):
    lower: int
    conjectured_upper: int


def poincare_bounds(n: int) -> DegreeBounds:
    _check_n(n)
    return DegreeBounds(n + 1, 2 * n * (n + 1))


def limit_cycle_bound(n: int) -> int:
    _check_n(n)
    return (2 * n * n + 2 * n - 1) * (n * n + n - 1) + 1


def limit_cycle_lower(n: int) -> int:
    _check_n(n)
    return (n - 1) * (n - 2) // 2 + 1


def line_count_bounds(n: int) -> LineBounds:
    """Parity lower bound and conjectured upper bound on the number of
    invariant lines of a degree-n system.

    The two formulas cross at n = 1 (4 > 2): a linear field with finitely
    many invariant lines has at most 2, so the lower bound is only
    meaningful from n = 2 on.  The values are returned unchanged.
    """
    _check_n(n)
    return LineBounds(2 * n + 1 if n % 2 == 0 else 2 * n + 2, 3 * n - 1)


def all_bounds(n: int) -> dict:
    return {
        "n": n,
        "poincare": list(poincare_bounds(n)),
        "harnack": harnack_bound(n),
        "limit_cycles": [limit_cycle_lower(n), limit_cycle_bound(n)],
        "lines": list(line_count_bounds(n)),
    }

"""SVG output: curve zero sets and an optional streamline layer.

Everything is computed on fixed grids with fixed step sizes, so the same
inputs give byte-identical files.
"""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from ..brackets import VectorField
from ..ratpoly import MPoly
from ..topo import Window, zero_set

STEP = 1e-3
SEEDS = (20, 10)   # 200 seeds
STEPS = 2000
SIZE = 600


def _vectorized(p: MPoly):
    terms = [(i, j, float(c)) for (i, j), c in p.items()]

    def f(x, y):
        out = np.zeros_like(x)
        for i, j, c in terms:
            out += c * x ** i * y ** j
        return out
    return f


def streamlines(v: VectorField, w: Window, step: float = STEP, seeds=SEEDS, steps: int = STEPS) -> list:
    """Fixed-step RK4 trajectories from a uniform grid of seeds.

    A trajectory stops when it leaves the window or stops moving.
    """
    P, Q = _vectorized(v.P), _vectorized(v.Q)
    nx, ny = seeds
    sx = w.x_min + (np.arange(nx) + 0.5) * (w.x_max - w.x_min) / nx
    sy = w.y_min + (np.arange(ny) + 0.5) * (w.y_max - w.y_min) / ny
    X, Y = (a.ravel() for a in np.meshgrid(sx, sy))
    x, y = X.copy(), Y.copy()
    alive = np.ones(x.shape, bool)
    paths = [[(a, b)] for a, b in zip(x.tolist(), y.tolist())]

    def rhs(x, y):
        return P(x, y), Q(x, y)

    with np.errstate(all="ignore"):
        for _ in range(steps):
            k1 = rhs(x, y)
            k2 = rhs(x + 0.5 * step * k1[0], y + 0.5 * step * k1[1])
            k3 = rhs(x + 0.5 * step * k2[0], y + 0.5 * step * k2[1])
            k4 = rhs(x + step * k3[0], y + step * k3[1])
            nx_ = x + step / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            ny_ = y + step / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            inside = (np.isfinite(nx_) & np.isfinite(ny_) & (nx_ >= w.x_min) & (nx_ <= w.x_max)
                      & (ny_ >= w.y_min) & (ny_ <= w.y_max))
            moving = (np.abs(nx_ - x) + np.abs(ny_ - y)) > 1e-12
            alive &= inside & moving
            if not alive.any():
                break
            x = np.where(alive, nx_, x)
            y = np.where(alive, ny_, y)
            for k in np.nonzero(alive)[0].tolist():
                paths[k].append((float(x[k]), float(y[k])))
    return [np.array(p) for p in paths if len(p) > 1]


def _points(arr: np.ndarray, w: Window) -> str:
    sx = SIZE / (w.x_max - w.x_min)
    sy = SIZE / (w.y_max - w.y_min)
    # thin long paths for file size; keep the endpoints
    if len(arr) > 400:
        idx = np.unique(np.r_[np.arange(0, len(arr), len(arr) // 400 + 1), len(arr) - 1])
        arr = arr[idx]
    return " ".join(f"{(px - w.x_min) * sx:.3f},{(w.y_max - py) * sy:.3f}" for px, py in arr)


def render(curves: Sequence[MPoly], w: Window, v: VectorField | None = None, labels=None) -> str:
    """SVG text with one ``<polyline class="curve">`` per zero-set piece and,
    when ``v`` is given, one ``<polyline class="stream">`` per trajectory."""
    labels = list(labels) if labels is not None else [f"g{i}" for i in range(len(curves))]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">',
           f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>']
    if v is not None:
        out.append('<g id="streamlines" stroke="#9aa" stroke-width="0.6" fill="none">')
        for path in streamlines(v, w):
            out.append(f'<polyline class="stream" points="{_points(path, w)}"/>')
        out.append("</g>")
    out.append('<g id="curves" stroke="#c22" stroke-width="1.8" fill="none">')
    for g, label in zip(curves, labels):
        for arr, closed, _ in zero_set(g, w).polylines:
            out.append(f'<polyline class="curve" data-curve="{escape(str(label))}" '
                       f'data-closed="{str(closed).lower()}" points="{_points(arr, w)}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

"""Oval counts of x^4 + y^4 - 5x^2 - 5y^2 + 4 + eps over a sweep of eps.

Compares marching squares against a dense flood fill of the sign pattern
and the Harnack bound.  The ring of two ovals splits into four at
eps = 9/4, where the level passes the saddles, and the curve is empty
past eps = 17/2.

    python3 scripts/oval_survey.py

The flood fill uses scipy, which comes with the ``test`` extra.
"""

import warnings
from fractions import Fraction

import numpy as np
from scipy import ndimage

from curveforge.ratpoly import MPoly
from curveforge.topo import count_ovals, grid_values, harnack_bound, root_bound_window

x, y = MPoly.gens(("x", "y"))


def flood_fill(g, w, n=1024):
    # bounded components of {g != 0} that do not touch the border, minus the
    # unbounded one; for smooth curves each oval bounds exactly one new region
    xs = np.linspace(w.x_min, w.x_max, n)
    ys = np.linspace(w.y_min, w.y_max, n)
    vals = grid_values(g, xs, ys)
    total = 0
    for mask in (vals > 0, vals < 0):
        labels, k = ndimage.label(mask)
        edge = set(np.unique(np.r_[labels[0], labels[-1], labels[:, 0], labels[:, -1]])) - {0}
        total += k - len(edge)
    return total


def main():
    print(f"{'eps':>7} {'ovals':>5} {'flood':>5} {'harnack':>7}")
    for eps in [Fraction(k, 4) for k in range(-2, 72, 4)]:
        g = x ** 4 + y ** 4 - 5 * x ** 2 - 5 * y ** 2 + 4 + eps
        w = root_bound_window(g)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            n = count_ovals(g, w)
        print(f"{float(eps):7.2f} {n:5d} {flood_fill(g, w):5d} {harnack_bound(4):7d}")


if __name__ == "__main__":
    main()

"""Closed-form trace and determinant at the two-nest critical points versus
the numeric Jacobian at the located points.

    python3 scripts/two_nest_liapunov.py [--draws N] [--seed S]
"""

import argparse
import random
from fractions import Fraction

from curveforge.builder import build_two_nests
from curveforge.topo import Window, critical_points, liapunov_two_nests


def rel(a, b):
    return abs(a - b) / max(1.0, abs(b))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--draws", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    worst = 0.0
    print(f"{'l':>2} {'a':>6} {'#pts':>4} {'trace(0)':>12} {'det(a/2)':>12} {'max rel err':>12}")
    for _ in range(args.draws):
        l = rng.randint(1, 3)
        a = Fraction(rng.randint(8, 24), rng.randint(2, 4))
        radii = [Fraction(r, 100) * a / 2 for r in sorted(rng.sample(range(1, 100), l))]
        (t0, d0), (th, dh) = liapunov_two_nests(l, a, radii)
        fa = float(a)
        pts = critical_points(build_two_nests(l, a, radii), Window(-fa / 2, 1.5 * fa, -fa, fa, 256))
        err = 0.0
        for loc, (t, d) in [((0, 0), (t0, d0)), ((fa, 0), (t0, d0)), ((fa / 2, 0), (th, dh))]:
            p = min(pts, key=lambda p: abs(p.location[0] - loc[0]) + abs(p.location[1] - loc[1]))
            err = max(err, rel(p.trace, float(t)), rel(p.det, float(d)))
        worst = max(worst, err)
        print(f"{l:2d} {float(a):6.2f} {len(pts):4d} {float(t0):12.5g} {float(dh):12.5g} {err:12.2e}")
    print(f"\nworst relative error {worst:.2e}")


if __name__ == "__main__":
    main()

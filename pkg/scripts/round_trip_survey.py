"""Build fields from random curves, then ask find_invariant_curve to get
them back.  Reports the recovery rate per family.

Curves whose cofactor admits a whole pencil of invariant curves are skipped,
since the returned basis of a pencil need not contain the curve itself.

    python3 scripts/round_trip_survey.py [--seeds N]
"""

import argparse
import random
import time
from fractions import Fraction

from curveforge.builder import CurveSet, MultiplierSet, build_planar
from curveforge.invariance import cofactor, curves_with_cofactor, find_invariant_curve
from curveforge.ratpoly import MPoly, monomials

XY = ("x", "y")
x, y = MPoly.gens(XY)


def rational(rng, span=5, den=3):
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def poly(rng, max_deg, terms=3):
    mons = rng.sample(monomials(2, max_deg), terms)
    return sum((MPoly.monomial(m, XY) * rational(rng) for m in mons), MPoly.zero(XY))


def conic(rng):
    return x ** 2 + rational(rng) * y ** 2 + poly(rng, 1)


def const(rng):
    return Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))


def survey(name, seeds, make):
    hits = total = 0
    misses = []
    t0 = time.perf_counter()
    for seed in range(seeds):
        rng = random.Random(seed)
        curves = make(rng)
        if curves is None or any(g.degree() < 1 for g in curves):
            continue
        v = build_planar(CurveSet(curves), MultiplierSet([const(rng) for _ in curves]))
        if v.degree < 2:
            continue
        for g in curves:
            K = cofactor(g, v).cofactor
            if len(curves_with_cofactor(v, K, g.degree())) > 1:
                continue
            total += 1
            if g.monic() in [h for h, _ in find_invariant_curve(v, g.degree())]:
                hits += 1
            else:
                misses.append(seed)
    print(f"{name:<12} {hits:4d}/{total:<4d} recovered in {time.perf_counter() - t0:6.1f} s"
          + (f"  misses at seeds {sorted(set(misses))}" if misses else ""))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=100)
    args = ap.parse_args()
    survey("line+conic", args.seeds, lambda rng: [poly(rng, 1), conic(rng)])
    survey("two conics", args.seeds, lambda rng: [conic(rng), conic(rng)])


if __name__ == "__main__":
    main()

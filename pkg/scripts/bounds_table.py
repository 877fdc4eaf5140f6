"""Table of the degree, oval, limit-cycle and line bounds for n = 1..N.

    python3 scripts/bounds_table.py [N]
"""

import sys

from curveforge.topo import all_bounds, harnack_bound


def main():
    top = int(sys.argv[1]) if len(sys.argv) > 1 else 10
    print(f"{'n':>3} {'poincare':>10} {'harnack(n)':>10} {'cycles':>14} {'lines':>10} {'composed ok':>11}")
    for n in range(1, top + 1):
        b = all_bounds(n)
        composed = (2 * n * n + 2 * n - 1) * (n * n + n - 1) + 1 == harnack_bound(2 * n * (n + 1))
        print(f"{n:3d} {str(tuple(b['poincare'])):>10} {b['harnack']:10d} {str(tuple(b['limit_cycles'])):>14} "
              f"{str(tuple(b['lines'])):>10} {str(composed):>11}")


if __name__ == "__main__":
    main()

"""Re-verify every stored fixture and print a timing table.

    python3 scripts/run_gallery.py [--jobs N]
"""

import argparse
import time

from curveforge.cli import gallery as gal


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    t0 = time.perf_counter()
    results = gal.run_gallery(gal.load_fixtures(), jobs=args.jobs)
    width = max(len(r.id) for r in results)
    for r in results:
        print(f"{r.id:<{width}}  {r.observed:<18} {'ok' if r.ok else 'UNEXPECTED':<10} {r.seconds:6.3f} s")
    counts = {}
    for r in results:
        counts[r.observed] = counts.get(r.observed, 0) + 1
    print(f"\n{len(results)} fixtures in {time.perf_counter() - t0:.2f} s: "
          + ", ".join(f"{k} {v}" for k, v in sorted(counts.items())))
    return 0 if all(r.ok for r in results) else 1


if __name__ == "__main__":
    raise SystemExit(main())

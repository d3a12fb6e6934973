#!/usr/bin/env python3
"""Verify the tabulated almost 3-covers of {0,1,2}^n and print their coverage profile."""
import argparse
from collections import Counter

from hypercover.cover import GridSpec, appendix_cover, lower_bound, verify_almost_cover


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--show-planes", action="store_true")
    args = ap.parse_args()
    print(f"{'n':>2} {'size':>4} {'lower':>5} {'origin':>6} {'min':>3}  coverage histogram")
    for n in (2, 3, 4):
        fam = appendix_cover(n)
        rep = verify_almost_cover(GridSpec(2, n), 3, fam)
        hist = Counter(c for p, c in rep.per_point.items() if any(p))
        lo, _ = lower_bound(2, n, 3)
        status = "ok" if rep.satisfied else "FAILED"
        print(f"{n:>2} {fam.size():>4} {lo:>5} {rep.excluded_cover:>6} {rep.min_cover_excluding:>3}  "
              f"{dict(sorted(hist.items()))}  {status}")
        if args.show_planes:
            for h, c in fam.items():
                print(f"      {h}" + (f"  (x{c})" if c > 1 else ""))


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Tabulate Y_{m,k}(n) from the composition sum, next to the closed form where one is known.

Values for k >= 5 are reported as experiments; no closed form is claimed there.
"""
import argparse

from hypercover.symfun import y_closed, y_sum


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-m", type=int, default=4)
    ap.add_argument("--max-k", type=int, default=6)
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()
    zeros = []
    for k in range(2, args.max_k + 1):
        print(f"k={k}")
        for m in range(1, args.max_m + 1):
            cells = []
            for n in range(max(1, k - 1), args.max_n + 1):
                ys, yc = y_sum(m, k, n), y_closed(m, k, n)
                mark = "" if yc is None else ("=" if yc == ys else "!")
                cells.append(f"n={n}:{ys}{mark}")
                if ys == 0:
                    zeros.append((m, k, n))
            print(f"  m={m}  " + "  ".join(cells))
    print("legend: '=' matches closed form, '!' disagrees, no mark means no closed form")
    print(f"vanishing instances: {zeros or 'none'}")


if __name__ == "__main__":
    main()

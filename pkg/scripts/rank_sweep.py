#!/usr/bin/env python3
"""Check dim V = N and full rank of the derivative-profile matrix for every (m,n,k) with N <= limit."""
import argparse
import time

from hypercover.nss import SpaceParams, psi_matrix_rank, reduced_basis


def params_up_to(limit):
    for n in range(1, 12):
        if SpaceParams(1, n, 2).N > limit:
            return
        m = 1
        while SpaceParams(m, n, 2).N <= limit:
            k = 2
            while SpaceParams(m, n, k).N <= limit:
                yield SpaceParams(m, n, k)
                k += 1
            m += 1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=int, default=200)
    ap.add_argument("--method", choices=["modular", "bareiss"], default="modular")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    t0 = time.perf_counter()
    count, bad = 0, []
    for p in params_up_to(args.limit):
        basis_ok = len(reduced_basis(p)) == p.N
        r = psi_matrix_rank(p, n_cap=args.limit, method=args.method)
        count += 1
        if not (basis_ok and r.is_isomorphism):
            bad.append((p.m, p.n, p.k))
        if args.verbose:
            print(f"m={p.m} n={p.n} k={p.k} N={p.N} rank={r.rank} ({r.method})")
    print(f"{count} instances with N <= {args.limit}, {len(bad)} failures {bad or ''}"
          f"in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()

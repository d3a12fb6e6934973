"""Exact linear algebra over Q and Z.

``bareiss_rank`` is the fraction-free elimination used for all rank claims.
``modular_rank`` is a fast certificate for integer matrices: full rank mod p
implies full rank over Q, so a full-rank answer from it is exact.  A deficient
answer is not, and callers must fall back to ``bareiss_rank``.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence

import numpy as np

# largest prime below 2**31; products of two residues fit in int64
DEFAULT_PRIME = 2147483647


def _integer_rows(rows: Sequence[Sequence]) -> List[List[int]]:
    out = []
    for row in rows:
        row = [Fraction(v) for v in row]
        d = lcm(*(v.denominator for v in row)) if row else 1
        out.append([int(v * d) for v in row])
    return out


def bareiss_rank(rows: Sequence[Sequence]) -> int:
    """Exact rank by fraction-free (Bareiss) elimination.

    Rational rows are scaled to integers first; scaling a row does not change
    the rank.
    """
    a = _integer_rows(rows)
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((r for r in range(rank, nrows) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        prow = a[rank]
        for r in range(rank + 1, nrows):
            row = a[r]
            f = row[col]
            # exact division by the previous pivot is the Bareiss invariant
            for c in range(col + 1, ncols):
                row[c] = (p * row[c] - f * prow[c]) // prev
            row[col] = 0
        prev = p
        rank += 1
    return rank


def modular_rank(rows: Sequence[Sequence[int]], p: int = DEFAULT_PRIME) -> int:
    """Rank of an integer matrix over GF(p)."""
    a = np.array([[int(v) % p for v in row] for row in rows], dtype=np.int64)
    if a.size == 0:
        return 0
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        below = a[rank + 1:, col].copy()
        mask = below != 0
        if mask.any():
            idx = np.nonzero(mask)[0] + rank + 1
            # entries are reduced below p < 2^31, so each product fits in int64
            f = below[mask][:, None]
            a[idx] = (a[idx] - (f * a[rank][None, :]) % p) % p
        rank += 1
    return rank


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Optional[List[Fraction]]:
    """Solve ``A x = b`` exactly; ``None`` when inconsistent.

    Underdetermined consistent systems return the solution with free
    variables set to zero.
    """
    m = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    if not m:
        return []
    ncols = len(m[0]) - 1
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    for i in range(r, len(m)):
        if m[i][-1]:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][-1]
    return x


def format_matrix(rows: Sequence[Sequence]) -> str:
    """Row-major text dump, rationals written ``p/q``."""
    return "\n".join(" ".join(str(Fraction(v)) for v in row) for row in rows) + "\n"

"""Symmetric functions and the univariate coefficient tables behind Y_{m,k}.

``a_table(m, k)`` expands ((x-1)(x-2)...(x-m))**k in the mixed basis

    (x-1)^(m)                                    (the falling factorial from 1)
    ((x)^(m+1))**l * (x+r-m-1)^(r)               1 <= l <= q, 0 <= r <= m

with q = floor(mk / (m+1)).  ``b_table`` is the single-index view
b[(m+1)l + r - m] = a[l, r], and ``y_sum`` is the composition sum giving
the coefficient of the top power sum.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .poly import Polynomial, falling_factorial

Composition = Tuple[int, ...]
PowerSumCombination = Dict[Composition, Fraction]


def harmonic(m: int) -> Fraction:
    if m < 0:
        raise ValueError("m must be non-negative")
    return sum((Fraction(1, i) for i in range(1, m + 1)), Fraction(0))


def double_harmonic(m: int) -> Fraction:
    """Sum of 1/(ij) over 1 <= i < j <= m."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return sum(
        (Fraction(1, i * j) for j in range(1, m + 1) for i in range(1, j)), Fraction(0)
    )


def compositions(total: int) -> Iterator[Composition]:
    """Ordered sequences of positive integers summing to ``total``."""
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first):
            yield (first,) + rest


# -- power sums and monomial symmetric polynomials ---------------------------

def power_sum(d: int, n: int) -> Polynomial:
    terms = {}
    for i in range(n):
        e = [0] * n
        e[i] = d
        terms[tuple(e)] = terms.get(tuple(e), 0) + 1
    return Polynomial(n, terms)


def power_product(mu: Sequence[int], n: int) -> Polynomial:
    out = Polynomial.constant(1, n)
    for d in mu:
        out = out * power_sum(d, n)
    return out


def monomial_sym(lam: Sequence[int], n: int) -> Polynomial:
    """Sum of x_{i1}^lam1 ... x_{it}^lamt over ordered tuples of distinct indices."""
    lam = tuple(lam)
    if any(part < 1 for part in lam):
        raise ValueError(f"parts must be positive: {lam}")
    if n < len(lam):
        raise ValueError(f"need n >= {len(lam)} variables, got {n}")
    terms: Dict[Tuple[int, ...], Fraction] = {}
    for idx in permutations(range(n), len(lam)):
        e = [0] * n
        for i, part in zip(idx, lam):
            e[i] = part
        terms[tuple(e)] = terms.get(tuple(e), 0) + 1
    return Polynomial(n, terms)


def _key(parts) -> Composition:
    return tuple(sorted(parts, reverse=True))


@lru_cache(maxsize=None)
def _m_to_p(lam: Composition) -> Tuple[Tuple[Composition, Fraction], ...]:
    if not lam:
        return (((), Fraction(1)),)
    *head, last = lam
    head = tuple(head)
    out: PowerSumCombination = {}
    for mu, c in _m_to_p(_key(head)):
        k = _key(mu + (last,))
        out[k] = out.get(k, 0) + c
    for j in range(len(head)):
        merged = list(head)
        merged[j] += last
        for mu, c in _m_to_p(_key(merged)):
            out[mu] = out.get(mu, 0) - c
    return tuple((k, v) for k, v in sorted(out.items()) if v)


def m_to_p(lam: Sequence[int]) -> PowerSumCombination:
    """Expand m_lam in products of power sums; keys are parts sorted decreasingly.

    Valid as a polynomial identity whenever n >= len(lam).
    """
    lam = tuple(lam)
    if any(part < 1 for part in lam):
        raise ValueError(f"parts must be positive: {lam}")
    return dict(_m_to_p(_key(lam)))


def top_p_coeff(lam: Sequence[int]) -> Fraction:
    """Coefficient of p_{|lam|} in m_lam, i.e. (-1)^(t-1) (t-1)!."""
    t = len(lam)
    if t == 0:
        raise ValueError("empty composition")
    return Fraction((-1) ** (t - 1) * factorial(t - 1))


# -- univariate coefficient tables -------------------------------------------

def _uni(p: Polynomial) -> List[Fraction]:
    coeffs = [Fraction(0)] * (p.degree() + 1)
    for (d,), c in p.items():
        coeffs[d] = c
    return coeffs


@dataclass(frozen=True)
class ATable:
    m: int
    k: int
    q: int
    a: Dict[Tuple[int, int], Fraction]

    def get(self, l: int, r: int) -> Fraction:
        return self.a.get((l, r), Fraction(0))

    def reconstruct(self) -> Polynomial:
        """Sum the basis expansion back into a univariate polynomial."""
        out = Polynomial.zero(1)
        for (l, r), c in self.a.items():
            out = out + mixed_basis_element(self.m, l, r).scale(c)
        return out

    def to_dict(self) -> dict:
        return {f"a[{l}][{r}]": str(c) for (l, r), c in sorted(self.a.items())}


def mixed_basis_element(m: int, l: int, r: int, var: int = 0, nvars: int = 1) -> Polynomial:
    """(x-1)^(m) when l = 0 (then r must be m), else ((x)^(m+1))**l (x+r-m-1)^(r)."""
    if l == 0:
        if r != m:
            raise ValueError("l = 0 only pairs with r = m")
        return falling_factorial(var, 1, m, nvars)
    return falling_factorial(var, 0, m + 1, nvars) ** l * falling_factorial(var, m + 1 - r, r, nvars)


@lru_cache(maxsize=None)
def a_table(m: int, k: int) -> ATable:
    """Exact triangular solve for the mixed-basis expansion of ((x-1)^(m))**k."""
    if m < 1 or k < 1:
        raise ValueError("need m >= 1 and k >= 1")
    q = (m * k) // (m + 1)
    basis: Dict[int, Tuple[Tuple[int, int], List[Fraction]]] = {}
    for s in range(m + 1):
        basis[s] = (("low", s), _uni(falling_factorial(0, 1, s, 1)))
    for l in range(1, q + 1):
        for r in range(m + 1):
            el = _uni(mixed_basis_element(m, l, r))
            basis[len(el) - 1] = ((l, r), el)
    assert sorted(basis) == list(range((m + 1) * q + m + 1))

    rest = _uni(falling_factorial(0, 1, m, 1) ** k)
    coeffs: Dict = {}
    for deg in range(len(rest) - 1, -1, -1):
        c = rest[deg]
        if not c:
            continue
        key, el = basis[deg]
        coeffs[key] = c
        for i, v in enumerate(el):
            rest[i] -= c * v
    assert not any(rest)
    low = {s: coeffs.pop(("low", s), Fraction(0)) for s in range(m + 1)}
    if any(low[s] for s in range(m)):
        raise AssertionError(f"expansion of ((x-1)^({m}))^{k} has low-degree terms {low}")
    a = {(0, m): low[m]}
    for l in range(1, q + 1):
        for r in range(m + 1):
            a[(l, r)] = coeffs.get((l, r), Fraction(0))
    return ATable(m, k, q, a)


def a_recurrence_check(m: int, k: int) -> bool:
    """Check both coefficient recurrences linking the k and k-1 tables."""
    if k < 2:
        raise ValueError("k >= 2 required")
    cur, prev = a_table(m, k), a_table(m, k - 1)
    for l in range(0, cur.q + 2):
        for r in range(m):
            if cur.get(l, r) != prev.get(l - 1, r + 1) - (m - r - 1) * cur.get(l, r + 1):
                return False
        if cur.get(l, m) != prev.get(l, 0) - m * cur.get(l + 1, 0):
            return False
    return True


@dataclass(frozen=True)
class BTable:
    m: int
    k: int
    b: Tuple[Fraction, ...]

    def __getitem__(self, d: int) -> Fraction:
        if d < 0:
            raise IndexError(d)
        return self.b[d] if d < len(self.b) else Fraction(0)

    def to_dict(self) -> dict:
        return {f"b[{d}]": str(c) for d, c in enumerate(self.b)}


@lru_cache(maxsize=None)
def b_table(m: int, k: int) -> BTable:
    """b_0 .. b_{(k-1)m}; indices past the end read as zero."""
    t = a_table(m, k)
    top = (k - 1) * m
    b = [Fraction(0)] * (top + 1)
    for (l, r), c in t.a.items():
        d = (m + 1) * l + r - m
        if d > top:
            if c:
                raise AssertionError(f"a[{l}][{r}] = {c} lands past b[{top}]")
            continue
        b[d] = c
    return BTable(m, k, tuple(b))


def y_sum(m: int, k: int, n: int) -> Fraction:
    """Sum over compositions (l1..lt) of k-1 of (-1)^(t-1) b0^(n-t) b[(m+1)l1-1] prod b[(m+1)lj]."""
    if k < 2 or n < k - 1:
        raise ValueError("need k >= 2 and n >= k-1")
    b = b_table(m, k)
    total = Fraction(0)
    for comp in compositions(k - 1):
        t = len(comp)
        term = Fraction((-1) ** (t - 1)) * b[0] ** (n - t) * b[(m + 1) * comp[0] - 1]
        for l in comp[1:]:
            term *= b[(m + 1) * l]
        total += term
    return total


def y_closed(m: int, k: int, n: int) -> Optional[Fraction]:
    """Closed forms for k = 2, 3 (m >= 1) and k = 4 (m >= 2); None elsewhere."""
    f = Fraction(factorial(m))
    if k == 2:
        return (-1) ** (m * (n - 1)) * f ** (n - 1)
    if k == 3:
        return f ** (2 * (n - 1)) * harmonic(m)
    if k == 4 and m >= 2:
        h, l2 = harmonic(m), double_harmonic(m)
        return (-1) ** (3 * m * (n - 3)) * f ** (3 * (n - 1)) * (2 * h * h - l2)
    return None


# (k, l, r offset from m, value as a function of m, smallest m covered)
CLOSED_FORMS: List[Tuple[int, int, int, Callable[[int], Fraction], int]] = [
    (2, 1, -1, lambda m: Fraction(1), 1),
    (3, 1, -1, lambda m: Fraction((-1) ** m * factorial(m)), 1),
    (3, 1, 0, lambda m: (-1) ** (m - 1) * factorial(m) * harmonic(m), 1),
    (4, 1, -1, lambda m: Fraction(factorial(m) ** 2), 2),
    (4, 1, 0, lambda m: -2 * factorial(m) ** 2 * harmonic(m), 2),
    (4, 2, -1, lambda m: (-1) ** (m - 1) * factorial(m) * harmonic(m), 2),
    (4, 2, 0, lambda m: (-1) ** (m - 2) * factorial(m) * double_harmonic(m), 2),
]


def a_top_closed(m: int, k: int) -> Fraction:
    """a[0][m] = ((-1)^m m!)^(k-1)."""
    return Fraction((-1) ** m * factorial(m)) ** (k - 1)


def phi_via_b(m: int, k: int, n: int) -> Polynomial:
    """Top homogeneous component of the reduced canonical polynomial, assembled from b.

    Sum of prod b[lam_i] x_i^(lam_i + m) over (lam_1..lam_n) with sum (m+1)(k-1)-1,
    one entry congruent to m mod (m+1) and the rest divisible by m+1.
    """
    if k < 2 or n < k - 1:
        raise ValueError("need k >= 2 and n >= k-1")
    b = b_table(m, k)
    total = (m + 1) * (k - 1) - 1
    terms: Dict[Tuple[int, ...], Fraction] = {}

    def rec(i: int, remaining: int, special_done: bool, acc: List[int]):
        if i == n:
            if remaining == 0 and special_done:
                coef = Fraction(1)
                for lam in acc:
                    coef *= b[lam]
                if coef:
                    e = tuple(lam + m for lam in acc)
                    terms[e] = terms.get(e, 0) + coef
            return
        for lam in range(remaining + 1):
            if lam % (m + 1) == 0:
                rec(i + 1, remaining - lam, special_done, acc + [lam])
            elif lam % (m + 1) == m and not special_done:
                rec(i + 1, remaining - lam, True, acc + [lam])

    rec(0, total, False, [])
    return Polynomial(n, terms)


def coefficient_report(m: int, k: int) -> dict:
    """Tables keyed ``a[l][r]`` and ``b[d]`` plus the recurrence verdict."""
    out = {"m": m, "k": k, **a_table(m, k).to_dict(), **b_table(m, k).to_dict()}
    if k >= 2:
        out["recurrence"] = a_recurrence_check(m, k)
    return out


def coefficient_json(m: int, k: int) -> str:
    return json.dumps(coefficient_report(m, k), indent=2, sort_keys=True)

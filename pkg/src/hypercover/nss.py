"""Reduced polynomial spaces on the grid {0..m}^n and the derivative-profile map.

A polynomial is (m,k)-reduced when its degree is at most
``mn + (m+1)(k-1) - 1`` and no monomial is divisible by a product of k
powers ``x_i^(m+1)`` (indices may repeat).  ``psi`` sends a polynomial to its
derivatives of order < k at the nonzero grid points and of order < k-1 at
the origin; on reduced polynomials it is a bijection onto Q^N.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BudgetExceeded
from .linalg import bareiss_rank, modular_rank, solve
from .poly import (
    INFINITE,
    MultiIndex,
    Polynomial,
    _falling,
    falling_factorial,
    grlex_key,
    iter_grid,
    multi_indices,
)

log = logging.getLogger(__name__)

DEFAULT_N_CAP = 500


def count_multi_indices(n: int, k: int) -> int:
    """Number of n-tuples of non-negative integers with sum < k, i.e. C(n+k-1, n)."""
    if k < 1:
        return 0
    return comb(n + k - 1, n)


@dataclass(frozen=True)
class SpaceParams:
    m: int
    n: int
    k: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        if self.k < 2:
            raise ValueError(f"need k >= 2, got k={self.k}")

    @property
    def deg_cap(self) -> int:
        return self.m * self.n + (self.m + 1) * (self.k - 1) - 1

    def M(self, j: int) -> int:
        return count_multi_indices(self.n, j)

    @property
    def N(self) -> int:
        return ((self.m + 1) ** self.n - 1) * self.M(self.k) + self.M(self.k - 1)

    def nonzero_points(self) -> List[Tuple[int, ...]]:
        return [p for p in iter_grid(self.m, self.n) if any(p)]

    def origin(self) -> Tuple[int, ...]:
        return (0,) * self.n


# -- the reduced space --------------------------------------------------------

def _high_power_count(e: Sequence[int], m: int) -> int:
    return sum(x // (m + 1) for x in e)


def reduced_basis(p: SpaceParams) -> List[MultiIndex]:
    """Monomials x^((m+1)l + r) with sum(l) < k, r_i <= m and degree <= deg_cap, graded-lex ascending."""
    out = []
    box = range(p.deg_cap + 1)
    for e in product(box, repeat=p.n):
        if sum(e) <= p.deg_cap and _high_power_count(e, p.m) < p.k:
            out.append(e)
    out.sort(key=grlex_key)
    return out


def is_reduced(P: Polynomial, p: SpaceParams) -> bool:
    if P.nvars != p.n:
        raise ValueError(f"polynomial in {P.nvars} variables, params n={p.n}")
    return P.degree() <= p.deg_cap and all(_high_power_count(e, p.m) < p.k for e in P.terms)


@lru_cache(maxsize=4096)
def _uni_factor(m: int, rest: int, high: int, low_start: Optional[int]) -> Tuple[Fraction, ...]:
    """Coefficients of x^rest * ((x)^(m+1))^high, or (x-1)^(m) * ((x)^(m+1))^high."""
    f = falling_factorial(0, 0, m + 1, 1) ** high
    if low_start is None:
        f = f.mul_monomial((rest,))
    else:
        f = f * falling_factorial(0, low_start, m, 1)
    out = [Fraction(0)] * (f.degree() + 1)
    for (d,), c in f.items():
        out[d] = c
    return tuple(out)


def _generator(e: MultiIndex, p: SpaceParams) -> Optional[List[Tuple[int, ...]]]:
    """Per-variable factor descriptions of the ideal/span element led by x^e, or None if x^e is allowed.

    Two shapes lead to a reduction step: monomials divisible by k powers
    x_i^(m+1) (ideal generators times a monomial) and monomials
    (x_1..x_n)^m times k-1 powers x_i^(m+1) (vanish to order k-1 at the origin).
    """
    m, k = p.m, p.k
    if _high_power_count(e, m) >= k:
        need = k
        factors = []
        for x in e:
            c = min(x // (m + 1), need)
            need -= c
            factors.append((m, x - (m + 1) * c, c, None))
        return factors
    if all(x >= m and (x - m) % (m + 1) == 0 for x in e) and sum(x - m for x in e) == (m + 1) * (k - 1):
        return [(m, 0, (x - m) // (m + 1), 1) for x in e]
    return None


def _expand_generator(shape) -> List[Tuple[MultiIndex, Fraction]]:
    factors = []
    for m, rest, high, low in shape:
        coeffs = _uni_factor(m, rest, high, low)
        factors.append([(d, c) for d, c in enumerate(coeffs) if c])
    out = []
    for combo in product(*factors):
        c = Fraction(1)
        for _, v in combo:
            c *= v
        out.append((tuple(d for d, _ in combo), c))
    return out


def _heap_key(e: MultiIndex):
    return (-sum(e), tuple(-x for x in e))


def reduce(P: Polynomial, p: SpaceParams) -> Polynomial:
    """The unique reduced P0 with P - P0 vanishing to order k off the origin and k-1 at it.

    Repeatedly cancels the graded-lex largest offending monomial against the
    generator it leads.  Each generator's other monomials have lower total
    degree, so one descending sweep suffices.
    """
    if P.nvars != p.n:
        raise ValueError(f"polynomial in {P.nvars} variables, params n={p.n}")
    terms: Dict[MultiIndex, Fraction] = dict(P.terms)
    heap = [_heap_key(e) for e in terms]
    heapq.heapify(heap)
    queued = set(terms)
    while heap:
        key = heapq.heappop(heap)
        e = tuple(-x for x in key[1])
        c = terms.get(e)
        if not c:
            continue
        factors = _generator(e, p)
        if factors is None:
            continue
        for f, v in _expand_generator(factors):
            nv = terms.get(f, 0) - c * v
            if nv:
                terms[f] = nv
            else:
                terms.pop(f, None)
            if f not in queued:
                queued.add(f)
                heapq.heappush(heap, _heap_key(f))
        assert e not in terms
    return Polynomial(p.n, terms)


# -- derivative profiles --------------------------------------------------------

@dataclass(frozen=True)
class DerivativeProfile:
    params: SpaceParams
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.params.N:
            raise ValueError(f"profile has {len(self.entries)} entries, expected N={self.params.N}")

    def is_zero(self) -> bool:
        return not any(self.entries)

    def to_text(self) -> str:
        labels = profile_labels(self.params)
        return "".join(
            f"{','.join(map(str, q))} {' '.join(map(str, j))} {v}\n"
            for (q, j), v in zip(labels, self.entries)
        )


@lru_cache(maxsize=None)
def profile_labels(p: SpaceParams) -> Tuple[Tuple[Tuple[int, ...], MultiIndex], ...]:
    """(point, multi-index) per profile entry: nonzero points in lex order, origin block last."""
    hi = multi_indices(p.n, p.k - 1)
    lo = multi_indices(p.n, p.k - 2)
    labels = [(q, j) for q in p.nonzero_points() for j in hi]
    labels += [(p.origin(), j) for j in lo]
    return tuple(labels)


def psi(P: Polynomial, p: SpaceParams) -> DerivativeProfile:
    if P.nvars != p.n:
        raise ValueError(f"polynomial in {P.nvars} variables, params n={p.n}")
    return DerivativeProfile(p, tuple(P.derivative_at(j, q) for q, j in profile_labels(p)))


def _monomial_derivative(e: MultiIndex, j: MultiIndex, q: Sequence[int]) -> int:
    v = 1
    for x, a, d in zip(q, e, j):
        if a < d:
            return 0
        v *= _falling(a, d) * x ** (a - d)
    return v


def psi_matrix(p: SpaceParams) -> List[List[int]]:
    """Rows: reduced basis monomials; columns: profile entries."""
    labels = profile_labels(p)
    return [[_monomial_derivative(e, j, q) for q, j in labels] for e in reduced_basis(p)]


@dataclass(frozen=True)
class RankResult:
    N: int
    basis_size: int
    rank: int
    method: str

    @property
    def is_isomorphism(self) -> bool:
        return self.rank == self.N == self.basis_size


def psi_matrix_rank(p: SpaceParams, n_cap: int = DEFAULT_N_CAP, method: str = "bareiss") -> RankResult:
    """Exact rank of the psi matrix on the reduced monomial basis.

    ``method="bareiss"`` is fraction-free elimination over Z.  ``"modular"``
    eliminates over GF(p); a full-rank answer certifies full rank over Q and
    any deficient answer is rechecked with Bareiss.
    """
    if p.N > n_cap:
        raise BudgetExceeded(f"N={p.N} exceeds cap {n_cap}")
    basis = reduced_basis(p)
    mat = psi_matrix(p)
    if method == "bareiss":
        rank = bareiss_rank(mat)
    elif method == "modular":
        rank = modular_rank(mat)
        if rank < min(len(mat), p.N):
            method, rank = "bareiss", bareiss_rank(mat)
    else:
        raise ValueError(f"unknown rank method {method!r}")
    return RankResult(p.N, len(basis), rank, method)


# -- interpolation through the triangular family ----------------------------

@lru_cache(maxsize=None)
def _grid_factor(p: SpaceParams, b: Tuple[int, ...]) -> Polynomial:
    out = Polynomial.constant(1, p.n)
    for t in range(p.n):
        x = Polynomial.variable(t, p.n)
        for s in range(p.m + 1):
            if s != b[t]:
                out = out * (x - s) ** p.k
    return out


def interpolation_polynomial(p: SpaceParams, i: MultiIndex, b: Tuple[int, ...]) -> Polynomial:
    """(x-b)^i times prod over coordinates t and grid values s != b_t of (x_t - s)^k."""
    shift = Polynomial.constant(1, p.n)
    for t, d in enumerate(i):
        if d:
            shift = shift * (Polynomial.variable(t, p.n) - b[t]) ** d
    return shift * _grid_factor(p, b)


@lru_cache(maxsize=None)
def _interpolation_system(p: SpaceParams):
    # rows and columns ordered by (|i|, point, i); triangular in that order
    keys = []
    for q in iter_grid(p.m, p.n):
        top = p.k - 2 if not any(q) else p.k - 1
        for j in multi_indices(p.n, top):
            keys.append((sum(j), q, grlex_key(j), j))
    keys.sort()
    order = [(q, j) for _, q, _, j in keys]
    polys = [interpolation_polynomial(p, i, b) for b, i in order]
    mat = [[P.derivative_at(j, q) for q, j in order] for P in polys]
    for r in range(len(order)):
        if not mat[r][r] or any(mat[r][c] for c in range(r)):
            raise AssertionError("interpolation system is not upper triangular")
    pos = {lab: idx for idx, lab in enumerate(order)}
    perm = [pos[lab] for lab in profile_labels(p)]
    return polys, mat, perm


def interpolate(p: SpaceParams, target: DerivativeProfile | Sequence) -> Polynomial:
    """A polynomial (usually not reduced) whose psi-profile is ``target``."""
    values = target.entries if isinstance(target, DerivativeProfile) else tuple(Fraction(v) for v in target)
    if len(values) != p.N:
        raise ValueError(f"target has {len(values)} entries, expected N={p.N}")
    polys, mat, perm = _interpolation_system(p)
    alpha = [Fraction(0)] * p.N
    for v, pos in zip(values, perm):
        alpha[pos] = Fraction(v)
    y = [Fraction(0)] * p.N
    for r in range(p.N):
        acc = alpha[r]
        for s in range(r):
            if y[s] and mat[s][r]:
                acc -= y[s] * mat[s][r]
        y[r] = acc / mat[r][r]
    out = Polynomial.zero(p.n)
    for c, P in zip(y, polys):
        if c:
            out = out + P.scale(c)
    return out


# -- U, W and the top-component map ------------------------------------------

def u_membership(P: Polynomial, p: SpaceParams) -> bool:
    """Reduced and vanishing to order >= k at every nonzero grid point."""
    if not is_reduced(P, p):
        return False
    return all(P.multiplicity_at(q) >= p.k for q in p.nonzero_points())


@dataclass(frozen=True)
class WBasis:
    params: SpaceParams
    labels: Tuple[Tuple[int, Tuple[int, ...]], ...]  # (d, l)
    elements: Tuple[Polynomial, ...]

    def __len__(self) -> int:
        return len(self.elements)


@lru_cache(maxsize=None)
def w_basis(p: SpaceParams) -> WBasis:
    """(x1..xn)^m (x^l)^(m+1) (x1^d + ... + xn^d) with d + (m+1)|l| = (m+1)(k-1) - 1.

    Ordered by |l| ascending then lexicographically; the first element
    (l = 0) is the anchor whose coefficient is tracked.
    """
    if p.n < p.k - 1:
        raise ValueError(f"need n >= k-1, got n={p.n}, k={p.k}")
    m, n = p.m, p.n
    target = (m + 1) * (p.k - 1) - 1
    ls = [l for l in product(range(p.k), repeat=n) if (m + 1) * sum(l) <= target]
    ls.sort(key=lambda l: (sum(l), l))
    labels, elems = [], []
    for l in ls:
        d = target - (m + 1) * sum(l)
        terms = {}
        for i in range(n):
            e = [m + (m + 1) * li for li in l]
            e[i] += d
            terms[tuple(e)] = terms.get(tuple(e), 0) + 1
        labels.append((d, l))
        elems.append(Polynomial(n, terms))
    return WBasis(p, tuple(labels), tuple(elems))


def phi(P: Polynomial, p: SpaceParams) -> Polynomial:
    return P.homogeneous_component(p.deg_cap)


def expand_in_w(Q: Polynomial, p: SpaceParams) -> Optional[List[Fraction]]:
    """Coordinates of Q in ``w_basis(p)``, or None when Q is outside the span."""
    wb = w_basis(p)
    if Q.is_zero():
        return [Fraction(0)] * len(wb)
    monos = sorted(set(Q.terms).union(*(el.terms for el in wb.elements)), key=grlex_key)
    rows = [[el.coeff(e) for el in wb.elements] for e in monos]
    rhs = [Q.coeff(e) for e in monos]
    return solve(rows, rhs)


# -- the canonical symmetric polynomial ---------------------------------------

class RouteDisagreement(AssertionError):
    pass


def canonical_P(p: SpaceParams) -> Polynomial:
    """prod_i ((x_i - 1)(x_i - 2)...(x_i - m))^k."""
    out = Polynomial.constant(1, p.n)
    for i in range(p.n):
        out = out * falling_factorial(i, 1, p.m, p.n) ** p.k
    return out


def canonical_P0_via_expansion(p: SpaceParams) -> Polynomial:
    """Keep the mixed-basis product terms with sum(l) <= k-1 and degree <= deg_cap."""
    from .symfun import a_table, mixed_basis_element

    table = a_table(p.m, p.k)
    per_var = [
        [(l, r, c, mixed_basis_element(p.m, l, r, i, p.n)) for (l, r), c in sorted(table.a.items()) if c]
        for i in range(p.n)
    ]
    out = Polynomial.zero(p.n)

    def rec(i: int, lsum: int, deg: int, coef: Fraction, acc: Polynomial):
        nonlocal out
        if i == p.n:
            out = out + acc.scale(coef)
            return
        for l, r, c, poly in per_var[i]:
            nl, nd = lsum + l, deg + (p.m + 1) * l + r
            if nl <= p.k - 1 and nd <= p.deg_cap:
                rec(i + 1, nl, nd, coef * c, acc * poly)

    rec(0, 0, 0, Fraction(1), Polynomial.constant(1, p.n))
    return out


def canonical_P0(p: SpaceParams) -> Polynomial:
    """Reduced form of ``canonical_P`` computed two ways; they must agree."""
    a = reduce(canonical_P(p), p)
    b = canonical_P0_via_expansion(p)
    if a != b:
        raise RouteDisagreement(f"generic reduction and basis expansion differ for {p}")
    return a


def anchor_coefficient(p: SpaceParams) -> Optional[Fraction]:
    """Coefficient of the l = 0 W-basis element in phi(canonical P0)."""
    coords = expand_in_w(phi(canonical_P0(p), p), p)
    return None if coords is None else coords[0]


# -- extremal polynomials ----------------------------------------------------

def low_order_extremal(p: SpaceParams, l: int) -> Polynomial:
    """x1^l prod_i prod_{j=1..m} (x_i - j)^k: order >= k off the origin, exactly l at it."""
    out = Polynomial.monomial([l] + [0] * (p.n - 1))
    for i in range(p.n):
        out = out * falling_factorial(i, 1, p.m, p.n) ** p.k
    return out


def top_order_extremal(p: SpaceParams) -> Polynomial:
    """x1^(k-1) prod_{j=1..m} (x1 - j)^(k-1) prod_i prod_{j=1..m} (x_i - j).

    Vanishes to order >= k off the origin and exactly k-1 at it, with degree
    deg_cap + 1.
    """
    out = Polynomial.monomial([p.k - 1] + [0] * (p.n - 1))
    out = out * falling_factorial(0, 1, p.m, p.n) ** (p.k - 1)
    for i in range(p.n):
        out = out * falling_factorial(i, 1, p.m, p.n)
    return out


def extremal_degree_check(p: SpaceParams, l: int) -> int:
    """Degree of the reduced form of ``low_order_extremal(p, l)``; expected deg_cap."""
    if p.k not in (2, 3, 4):
        raise ValueError(f"k must be 2, 3 or 4, got {p.k}")
    if not 0 <= l <= p.k - 2:
        raise ValueError(f"need 0 <= l <= k-2, got l={l}")
    if p.n < p.k - 1:
        raise ValueError(f"need n >= k-1, got n={p.n}")
    return reduce(low_order_extremal(p, l), p).degree()


def origin_profile_residual(P: Polynomial, p: SpaceParams) -> DerivativeProfile:
    """psi(P - reduce(P)); zero exactly when reduction preserved the profile."""
    return psi(P - reduce(P, p), p)


__all__ = [
    "INFINITE",
    "SpaceParams",
    "DerivativeProfile",
    "RankResult",
    "WBasis",
    "reduced_basis",
    "is_reduced",
    "reduce",
    "psi",
    "psi_matrix",
    "psi_matrix_rank",
    "profile_labels",
    "interpolate",
    "interpolation_polynomial",
    "u_membership",
    "w_basis",
    "phi",
    "expand_in_w",
    "canonical_P",
    "canonical_P0",
    "canonical_P0_via_expansion",
    "anchor_coefficient",
    "low_order_extremal",
    "top_order_extremal",
    "extremal_degree_check",
]

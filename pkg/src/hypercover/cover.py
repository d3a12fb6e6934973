"""Hyperplanes, cover families over the grid {0..m}^n, and explicit constructions."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from importlib import resources
from math import gcd, lcm
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .poly import iter_grid

GridPoint = Tuple[int, ...]


class CoverParseError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"grid needs m >= 1 and n >= 1, got m={self.m}, n={self.n}")

    def points(self) -> Iterator[GridPoint]:
        return iter_grid(self.m, self.n)

    def origin(self) -> GridPoint:
        return (0,) * self.n

    def contains(self, p: Sequence[int]) -> bool:
        return len(p) == self.n and all(0 <= x <= self.m for x in p)

    def size(self) -> int:
        return (self.m + 1) ** self.n


@dataclass(frozen=True, order=True)
class Hyperplane:
    """The affine hyperplane ``coeffs . x = rhs`` with integer data.

    Construction normalizes: gcd of all entries is 1 and the first nonzero
    coefficient is positive, so scalar multiples compare equal.
    """

    coeffs: Tuple[int, ...]
    rhs: int

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        rhs = int(self.rhs)
        if not any(coeffs):
            raise ValueError("hyperplane needs a nonzero coefficient")
        g = reduce(gcd, coeffs, abs(rhs))
        first = next(c for c in coeffs if c)
        if first < 0:
            g = -g
        object.__setattr__(self, "coeffs", tuple(c // g for c in coeffs))
        object.__setattr__(self, "rhs", rhs // g)

    @classmethod
    def from_rational(cls, coeffs: Sequence, rhs) -> "Hyperplane":
        vals = [Fraction(c) for c in coeffs] + [Fraction(rhs)]
        d = lcm(*(v.denominator for v in vals))
        ints = [int(v * d) for v in vals]
        return cls(tuple(ints[:-1]), ints[-1])

    @classmethod
    def axis(cls, i: int, value: int, n: int) -> "Hyperplane":
        c = [0] * n
        c[i] = 1
        return cls(tuple(c), value)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def contains(self, p: Sequence[int]) -> bool:
        if len(p) != len(self.coeffs):
            raise ValueError(f"point of dimension {len(p)} for hyperplane in dimension {self.n}")
        return sum(c * x for c, x in zip(self.coeffs, p)) == self.rhs

    def sort_key(self):
        return (sum(abs(c) for c in self.coeffs), self.coeffs, self.rhs)

    def to_line(self, count: int = 1) -> str:
        return " ".join(str(c) for c in self.coeffs) + f" = {self.rhs} x {count}"

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            var = f"x{i + 1}"
            mag = "" if abs(c) == 1 else str(abs(c))
            sign = "-" if c < 0 else "+"
            parts.append((sign, mag + var))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, t in parts[1:]:
            s += f" {sign} {t}"
        return f"{s} = {self.rhs}"


class CoverFamily:
    """Multiset of hyperplanes: plane -> positive multiplicity."""

    __slots__ = ("_planes",)

    def __init__(self, planes: Mapping[Hyperplane, int] | Iterable[Tuple[Hyperplane, int]] = ()):
        items = planes.items() if isinstance(planes, Mapping) else planes
        acc: Dict[Hyperplane, int] = {}
        dims = set()
        for h, c in items:
            if c < 1:
                raise ValueError(f"multiplicity must be positive, got {c} for {h}")
            dims.add(h.n)
            acc[h] = acc.get(h, 0) + int(c)
        if len(dims) > 1:
            raise ValueError(f"mixed dimensions in family: {sorted(dims)}")
        self._planes = dict(sorted(acc.items(), key=lambda t: t[0].sort_key()))

    @property
    def planes(self) -> Mapping[Hyperplane, int]:
        return self._planes

    def items(self):
        return self._planes.items()

    def size(self) -> int:
        return sum(self._planes.values())

    def __len__(self) -> int:
        return len(self._planes)

    @property
    def n(self) -> Optional[int]:
        return next((h.n for h in self._planes), None)

    def __eq__(self, other) -> bool:
        return isinstance(other, CoverFamily) and self._planes == other._planes

    def __hash__(self):
        return hash(frozenset(self._planes.items()))

    def without(self, h: Hyperplane, count: int = 1) -> "CoverFamily":
        d = dict(self._planes)
        d[h] = d.get(h, 0) - count
        if d[h] < 0:
            raise KeyError(f"{h} has multiplicity below {count}")
        return CoverFamily({k: v for k, v in d.items() if v > 0})

    def to_text(self) -> str:
        return "".join(h.to_line(c) + "\n" for h, c in self._planes.items())

    @classmethod
    def from_text(cls, text: str) -> "CoverFamily":
        """Parse lines ``c1 ... cn = rhs x count``; ``#`` comments allowed, ``x count`` optional."""
        items = []
        n = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                lhs, rest = line.split("=")
                coeffs = tuple(int(t) for t in lhs.split())
                rest = rest.split()
                if not rest:
                    raise ValueError("missing right-hand side")
                rhs = int(rest[0])
                if len(rest) == 1:
                    count = 1
                elif len(rest) == 3 and rest[1] == "x":
                    count = int(rest[2])
                else:
                    raise ValueError("expected 'rhs x count'")
                h = Hyperplane(coeffs, rhs)
            except ValueError as exc:
                raise CoverParseError(f"line {lineno}: {raw!r}: {exc}") from None
            if n is None:
                n = len(coeffs)
            elif len(coeffs) != n:
                raise CoverParseError(f"line {lineno}: expected {n} coefficients, got {len(coeffs)}")
            if count < 1:
                raise CoverParseError(f"line {lineno}: count must be positive")
            items.append((h, count))
        return cls(items)

    def __repr__(self) -> str:
        body = ", ".join(f"{h}" + (f" x{c}" if c > 1 else "") for h, c in self._planes.items())
        return f"CoverFamily({{{body}}}, size={self.size()})"


@dataclass
class CoverReport:
    k: int
    excluded: GridPoint
    per_point: Dict[GridPoint, int]
    min_cover_excluding: int
    excluded_cover: int
    satisfied: bool
    size: int = 0
    deficient: List[GridPoint] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "size": self.size,
            "excluded": list(self.excluded),
            "excluded_cover": self.excluded_cover,
            "min_cover_excluding": self.min_cover_excluding,
            "satisfied": self.satisfied,
            "deficient": [list(p) for p in self.deficient],
            "per_point": {",".join(map(str, p)): c for p, c in self.per_point.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def coverage_count(family: CoverFamily, p: Sequence[int]) -> int:
    return sum(c for h, c in family.items() if h.contains(p))


def verify_almost_cover(g: GridSpec, k: int, family: CoverFamily, excluded: Sequence[int] | None = None) -> CoverReport:
    """Check that every grid point except ``excluded`` is covered at least ``k`` times
    and ``excluded`` is not covered at all."""
    if k < 1:
        raise ValueError("k must be >= 1")
    excluded = tuple(excluded) if excluded is not None else g.origin()
    if not g.contains(excluded):
        raise ValueError(f"excluded point {excluded} not in grid {g}")
    if family.n is not None and family.n != g.n:
        raise ValueError(f"family in dimension {family.n}, grid in dimension {g.n}")
    per_point = {p: coverage_count(family, p) for p in g.points()}
    others = [c for p, c in per_point.items() if p != excluded]
    deficient = [p for p, c in per_point.items() if p != excluded and c < k]
    exc = per_point[excluded]
    return CoverReport(
        k=k,
        excluded=excluded,
        per_point=per_point,
        min_cover_excluding=min(others) if others else 0,
        excluded_cover=exc,
        satisfied=exc == 0 and not deficient,
        size=family.size(),
        deficient=deficient,
    )


def construct_two_cover(g: GridSpec, a: Sequence[int] | None = None) -> CoverFamily:
    """Family of mn + m planes covering the grid twice except at ``a``.

    Axis planes x_i = j (j != a_i), plus m planes sum (x_i - a_i)/(b_i - a_i) = 1
    where round r uses the r-th unused value b_i of each coordinate.
    """
    if g.n < 2:
        raise ValueError("two-cover construction needs n >= 2")
    a = tuple(a) if a is not None else g.origin()
    if not g.contains(a):
        raise ValueError(f"point {a} not in grid")
    items = []
    others = []
    for i in range(g.n):
        vals = [j for j in range(g.m + 1) if j != a[i]]
        others.append(vals)
        items.extend((Hyperplane.axis(i, j, g.n), 1) for j in vals)
    for r in range(g.m):
        b = [others[i][r] for i in range(g.n)]
        coeffs = [Fraction(1, b[i] - a[i]) for i in range(g.n)]
        rhs = 1 + sum(Fraction(a[i], b[i] - a[i]) for i in range(g.n))
        items.append((Hyperplane.from_rational(coeffs, rhs), 1))
    return CoverFamily(items)


def construct_layered_cover(g: GridSpec, k: int) -> CoverFamily:
    """Axis planes x_i = 1..m plus k-t-1 copies of sum x = tm+1..(t+1)m for t = 0..k-2."""
    if k < 1:
        raise ValueError("layered construction needs k >= 1")
    items = [(Hyperplane.axis(i, j, g.n), 1) for i in range(g.n) for j in range(1, g.m + 1)]
    ones = (1,) * g.n
    for t in range(k - 1):
        for s in range(t * g.m + 1, (t + 1) * g.m + 1):
            items.append((Hyperplane(ones, s), k - t - 1))
    return CoverFamily(items)


def load_cover(name: str) -> CoverFamily:
    """Load a cover file shipped in the package data directory."""
    text = resources.files("hypercover").joinpath("data", name).read_text()
    return CoverFamily.from_text(text)


def appendix_cover(n: int) -> CoverFamily:
    """Almost 3-covers of {0,1,2}^n of sizes 9, 11, 13 for n = 2, 3, 4."""
    if n not in (2, 3, 4):
        raise ValueError(f"no tabulated cover for n={n}; available: 2, 3, 4")
    return load_cover(f"appendix-n{n}.cover")


# -- lower bounds -----------------------------------------------------------

BALL_SERRA = "Ball-Serra"
TWO_COVER_EXACT = "two-cover-exact"
DEGREE_BOUND = "reduced-degree-k34"


def lower_bound(m: int, n: int, k: int) -> Tuple[int, str]:
    """Best proven lower bound on the size of an almost k-cover of {0..m}^n.

    The punctured-nullstellensatz bound mn + (k-1)m holds for all k >= 1.
    For k = 2, n >= 2 it is attained.  For k in {3, 4} with n >= k-1 the
    degree bound mn + (m+1)(k-1) - 1 is stronger.
    """
    if m < 1 or n < 1 or k < 1:
        raise ValueError("need m, n, k >= 1")
    value, tag = m * n + (k - 1) * m, BALL_SERRA
    if k == 2 and n >= 2:
        tag = TWO_COVER_EXACT
    if k in (3, 4) and n >= k - 1:
        value, tag = m * n + (m + 1) * (k - 1) - 1, DEGREE_BOUND
    return value, tag


def upper_bound(m: int, n: int, k: int) -> int:
    """Size of the layered construction (the two-cover construction for k = 2)."""
    return m * n + m * k * (k - 1) // 2

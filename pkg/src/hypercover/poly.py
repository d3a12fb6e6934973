"""Exact multivariate polynomials over the rationals.

Polynomials are immutable maps from exponent tuples to nonzero ``Fraction``
coefficients.  Monomials are compared in graded lexicographic order (total
degree first, then lexicographic on the exponent tuple).
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

MultiIndex = Tuple[int, ...]
Number = Union[int, Fraction]

#: multiplicity of every point on the zero polynomial
INFINITE = math.inf


class DimensionError(ValueError):
    pass


class PolyParseError(ValueError):
    pass


def grlex_key(e: MultiIndex) -> Tuple[int, MultiIndex]:
    return (sum(e), e)


def multi_indices(n: int, max_degree: int) -> list[MultiIndex]:
    """All multi-indices of length ``n`` with total degree <= ``max_degree``, graded-lex ascending."""
    if max_degree < 0:
        return []
    out = [e for e in product(range(max_degree + 1), repeat=n) if sum(e) <= max_degree]
    out.sort(key=grlex_key)
    return out


def _exact(c) -> Fraction:
    if isinstance(c, float):
        raise TypeError(f"float coefficient {c!r}; use Fraction or int")
    return Fraction(c)


def _falling(e: int, j: int) -> int:
    # e (e-1) ... (e-j+1)
    r = 1
    for t in range(j):
        r *= e - t
    return r


class Polynomial:
    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[MultiIndex, Number] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = nvars
        clean: Dict[MultiIndex, Fraction] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != nvars:
                    raise DimensionError(f"exponent {e} has length {len(e)}, expected {nvars}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in {e}")
                c = _exact(c)
                if c:
                    clean[e] = clean.get(e, Fraction(0)) + c
            clean = {e: c for e, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[MultiIndex, Fraction]) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, c: Number, nvars: int) -> "Polynomial":
        c = _exact(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: Number = 1) -> "Polynomial":
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    # -- container protocol -------------------------------------------
    @property
    def terms(self) -> Mapping[MultiIndex, Fraction]:
        return self._terms

    def items(self):
        return self._terms.items()

    def coeff(self, e: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(e), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def sorted_terms(self, descending: bool = True) -> list[Tuple[MultiIndex, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=descending)

    def leading_monomial(self) -> MultiIndex | None:
        if not self._terms:
            return None
        return max(self._terms, key=grlex_key)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    # -- equality -----------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise DimensionError(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Number) -> "Polynomial":
        c = _exact(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[MultiIndex, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, exps: Sequence[int], coeff: Number = 1) -> "Polynomial":
        c = _exact(coeff)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(
            self.nvars,
            {tuple(a + b for a, b in zip(e, exps)): v * c for e, v in self._terms.items()},
        )

    def divide_monomial(self, exps: Sequence[int]) -> "Polynomial":
        """Exact division by ``x**exps``; raises if some term is not divisible."""
        out = {}
        for e, c in self._terms.items():
            q = tuple(a - b for a, b in zip(e, exps))
            if any(x < 0 for x in q):
                raise ValueError(f"monomial {tuple(exps)} does not divide term {e}")
            out[q] = c
        return Polynomial._raw(self.nvars, out)

    def divisible_by_monomial(self, exps: Sequence[int]) -> bool:
        return all(all(a >= b for a, b in zip(e, exps)) for e in self._terms)

    def permute(self, perm: Sequence[int]) -> "Polynomial":
        """Substitute x_i -> x_{perm[i]}."""
        out = {}
        for e, c in self._terms.items():
            new = [0] * self.nvars
            for i, x in enumerate(e):
                new[perm[i]] = x
            out[tuple(new)] = c
        return Polynomial._raw(self.nvars, out)

    def is_symmetric(self) -> bool:
        if self.nvars < 2:
            return True
        swaps = [[1, 0] + list(range(2, self.nvars))]
        if self.nvars > 2:
            swaps.append(list(range(1, self.nvars)) + [0])
        return all(self.permute(p) == self for p in swaps)

    # -- calculus -----------------------------------------------------
    def _check_point(self, a: Sequence) -> Tuple[Fraction, ...]:
        if len(a) != self.nvars:
            raise DimensionError(f"point of dimension {len(a)} for {self.nvars} variables")
        return tuple(_exact(x) for x in a)

    def evaluate(self, a: Sequence[Number]) -> Fraction:
        a = self._check_point(a)
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(a, e):
                if k:
                    v *= x ** k
            total += v
        return total

    __call__ = evaluate

    def recenter(self, a: Sequence[Number]) -> "Polynomial":
        """Return Q with Q(x) = P(x + a)."""
        a = self._check_point(a)
        out: Dict[MultiIndex, Fraction] = {}
        for e, c in self._terms.items():
            factors = []
            for x, k in zip(a, e):
                factors.append([(j, math.comb(k, j) * x ** (k - j)) for j in range(k + 1) if x or j == k])
            for combo in product(*factors):
                v = c
                for _, w in combo:
                    v *= w
                if v:
                    key = tuple(j for j, _ in combo)
                    out[key] = out.get(key, 0) + v
        return Polynomial._raw(self.nvars, {e: c for e, c in out.items() if c})

    def partial_derivative(self, j: Sequence[int]) -> "Polynomial":
        if len(j) != self.nvars:
            raise DimensionError(f"multi-index of length {len(j)} for {self.nvars} variables")
        out = {}
        for e, c in self._terms.items():
            if any(a < b for a, b in zip(e, j)):
                continue
            f = 1
            for a, b in zip(e, j):
                f *= _falling(a, b)
            out[tuple(a - b for a, b in zip(e, j))] = c * f
        return Polynomial._raw(self.nvars, out)

    def derivative_at(self, j: Sequence[int], a: Sequence[Number]) -> Fraction:
        """Value of the ``j`` partial derivative at ``a`` without building the derivative."""
        a = self._check_point(a)
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, k, d in zip(a, e, j):
                if k < d:
                    v = 0
                    break
                if d:
                    v *= _falling(k, d)
                if k > d:
                    v *= x ** (k - d)
            total += v
        return total

    def multiplicity_at(self, a: Sequence[Number]) -> Union[int, float]:
        """Order of vanishing at ``a``: minimum total degree of ``P(x + a)``.

        The zero polynomial returns ``INFINITE``.
        """
        if not self._terms:
            return INFINITE
        q = self.recenter(a)
        return min(sum(e) for e in q._terms)

    def homogeneous_component(self, d: int) -> "Polynomial":
        return Polynomial._raw(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == d})

    # -- text ---------------------------------------------------------
    def to_text(self) -> str:
        lines = []
        for e, c in self.sorted_terms():
            lines.append(" ".join([str(c)] + [str(x) for x in e]))
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str, nvars: int | None = None) -> "Polynomial":
        """Parse the one-term-per-line format ``c e1 ... en``.

        ``#`` starts a comment; blank lines are skipped.  An empty input needs
        ``nvars`` to know the ambient dimension.
        """
        terms: Dict[MultiIndex, Fraction] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                c = Fraction(parts[0])
                e = tuple(int(x) for x in parts[1:])
            except (ValueError, ZeroDivisionError) as exc:
                raise PolyParseError(f"line {lineno}: {raw!r}: {exc}") from None
            if any(x < 0 for x in e):
                raise PolyParseError(f"line {lineno}: negative exponent")
            if nvars is None:
                nvars = len(e)
            if len(e) != nvars:
                raise PolyParseError(f"line {lineno}: expected {nvars} exponents, got {len(e)}")
            terms[e] = terms.get(e, Fraction(0)) + c
        if nvars is None:
            raise PolyParseError("empty polynomial file and no dimension given")
        return cls(nvars, terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def falling_factorial(var: int, start: Number, m: int, nvars: int) -> Polynomial:
    """``(x_var - start)(x_var - start - 1) ... (x_var - start - m + 1)``; ``m = 0`` gives 1."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if not 0 <= var < nvars:
        raise IndexError(f"variable index {var} out of range for {nvars} variables")
    x = Polynomial.variable(var, nvars)
    start = Fraction(start)
    out = Polynomial.constant(1, nvars)
    for t in range(m):
        out = out * (x - (start + t))
    return out


def univariate(coeffs: Iterable[Number], var: int, nvars: int) -> Polynomial:
    """Lift ``sum coeffs[d] * t**d`` to a polynomial in ``x_var``."""
    terms = {}
    for d, c in enumerate(coeffs):
        e = [0] * nvars
        e[var] = d
        terms[tuple(e)] = c
    return Polynomial(nvars, terms)


def product_of(polys: Iterable[Polynomial], nvars: int) -> Polynomial:
    out = Polynomial.constant(1, nvars)
    for p in polys:
        out = out * p
    return out


def iter_grid(m: int, n: int) -> Iterator[Tuple[int, ...]]:
    """Points of {0..m}^n in lexicographic order."""
    return product(range(m + 1), repeat=n)

from fractions import Fraction
from math import factorial

import pytest
import sympy as sp

from hypercover.poly import Polynomial
from hypercover.symfun import (
    CLOSED_FORMS,
    a_recurrence_check,
    a_table,
    a_top_closed,
    b_table,
    coefficient_report,
    compositions,
    double_harmonic,
    harmonic,
    m_to_p,
    monomial_sym,
    power_product,
    power_sum,
    top_p_coeff,
    y_closed,
    y_sum,
)


def x(i, n):
    return Polynomial.variable(i, n)


def test_harmonic_numbers():
    assert harmonic(2) == Fraction(3, 2)
    assert harmonic(0) == 0
    assert double_harmonic(2) == Fraction(1, 2)
    assert double_harmonic(1) == 0
    assert double_harmonic(3) == Fraction(1, 2) + Fraction(1, 3) + Fraction(1, 6)


def test_compositions():
    assert sorted(compositions(3)) == [(1, 1, 1), (1, 2), (2, 1), (3,)]
    assert sum(1 for _ in compositions(6)) == 2 ** 5


def test_symmetric_polynomials():
    assert power_sum(2, 2) == x(0, 2) ** 2 + x(1, 2) ** 2
    assert monomial_sym((1, 1), 2) == 2 * x(0, 2) * x(1, 2)
    assert monomial_sym((2,), 3) == power_sum(2, 3)
    with pytest.raises(ValueError):
        monomial_sym((1, 1, 1), 2)


def test_m_to_p_examples():
    assert m_to_p((1, 1)) == {(1, 1): 1, (2,): -1}
    assert m_to_p((1, 1, 1)) == {(1, 1, 1): 1, (2, 1): -3, (3,): 2}
    assert m_to_p((4,)) == {(4,): 1}


def _all_compositions_up_to(total):
    for s in range(1, total + 1):
        yield from compositions(s)


@pytest.mark.parametrize("lam", list(_all_compositions_up_to(6)))
def test_m_to_p_is_polynomial_identity(lam):
    n = len(lam)
    lhs = monomial_sym(lam, n)
    rhs = Polynomial.zero(n)
    for mu, c in m_to_p(lam).items():
        rhs = rhs + power_product(mu, n).scale(c)
    assert lhs == rhs
    assert m_to_p(lam).get((sum(lam),), 0) == top_p_coeff(lam)


def test_top_p_coeff_examples():
    assert top_p_coeff((5,)) == 1
    assert top_p_coeff((1, 1)) == -1
    assert top_p_coeff((1, 1, 1)) == 2


def test_a_table_examples():
    assert a_table(2, 3).get(0, 2) == 4
    for m in (1, 2, 3):
        assert a_table(m, 2).get(1, m - 1) == 1
    assert a_table(2, 3).get(1, 2) == -3


def _sympy_basis(m, l, r, X):
    if l == 0:
        return sp.ff(X - 1, m)
    return sp.ff(X, m + 1) ** l * sp.ff(X + r - m - 1, r)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_a_table_reconstruction_independent(m, k):
    t = a_table(m, k)
    assert t.reconstruct() == Polynomial(1, {(i,): c for i, c in enumerate(
        reversed(sp.Poly(sp.expand(sp.ff(sp.Symbol("x") - 1, m) ** k), sp.Symbol("x")).all_coeffs()))})
    X = sp.Symbol("x")
    total = sum(sp.Rational(c.numerator, c.denominator) * _sympy_basis(m, l, r, X) for (l, r), c in t.a.items())
    assert sp.expand(total - sp.ff(X - 1, m) ** k) == 0


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_recurrences(m, k):
    assert a_recurrence_check(m, k)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_closed_value_rows(m):
    for k in range(1, 6):
        assert a_table(m, k).get(0, m) == a_top_closed(m, k)
    for k, l, dr, f, mmin in CLOSED_FORMS:
        if m >= mmin:
            assert a_table(m, k).get(l, m + dr) == f(m), (k, l, dr, m)


def test_b_table_examples():
    b = b_table(1, 2)
    assert (b[0], b[1]) == (-1, 1)
    b = b_table(2, 2)
    assert b[0] == 2 and b[1] == a_table(2, 2).get(1, 0) and b[2] == 1
    for m in (1, 2, 3):
        for k in (2, 3, 4):
            b = b_table(m, k)
            assert all(b[d] == 0 for d in range((k - 1) * m + 1, (k - 1) * m + 10))
            t = a_table(m, k)
            for (l, r), c in t.a.items():
                d = (m + 1) * l + r - m
                assert b[d] == c or d > (k - 1) * m


def test_y_examples():
    assert y_sum(1, 2, 2) == -1
    assert y_sum(2, 3, 2) == 6
    assert y_sum(2, 3, 3) == 24
    assert y_sum(2, 4, 3) == 256
    assert y_closed(1, 2, 3) == 1
    assert y_closed(1, 3, 2) == 1
    assert y_closed(1, 4, 5) is None


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("k", [2, 3, 4])
def test_y_sum_matches_closed_form(m, k):
    for n in range(max(k - 1, 1), 6):
        yc = y_closed(m, k, n)
        if k == 4 and m == 1:
            assert yc is None
            continue
        assert y_sum(m, k, n) == yc


def test_y_k2_formula_direct():
    for m in (1, 2, 3):
        for n in (1, 2, 3, 4):
            assert y_sum(m, 2, n) == (-1) ** (m * (n - 1)) * factorial(m) ** (n - 1)


def test_y_requires_range():
    with pytest.raises(ValueError):
        y_sum(2, 4, 2)


def test_coefficient_report_keys():
    rep = coefficient_report(1, 2)
    assert rep["b[0]"] == "-1" and rep["b[1]"] == "1" and rep["recurrence"] is True
    rep = coefficient_report(2, 4)
    assert rep["a[2][2]"] == str((-1) ** 0 * 2 * double_harmonic(2))

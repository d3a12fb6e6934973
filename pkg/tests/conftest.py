from fractions import Fraction

import pytest

from hypercover.poly import Polynomial


def X(i, n):
    return Polynomial.variable(i, n)


@pytest.fixture
def xs2():
    return X(0, 2), X(1, 2)


@pytest.fixture
def xs3():
    return X(0, 3), X(1, 3), X(2, 3)


def F(a, b=1):
    return Fraction(a, b)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

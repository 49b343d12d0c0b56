"""Shared fixtures: a sieve table and generic (non-resonant) parameter points."""

from fractions import Fraction

import pytest

from hyperel import ParamPoint, PrimeTable


@pytest.fixture(scope="session")
def table_2k():
    return PrimeTable.build(2000)


# Rational points with no integer differences among {a, b, c, c-a, c-b, a-b},
# so every contiguity step is defined and no series truncates early.
GENERIC_POINTS = [
    ParamPoint.of(Fraction(13, 7), Fraction(23, 11), Fraction(31, 13)),
    ParamPoint.of(Fraction(-5, 3), Fraction(7, 4), Fraction(9, 5)),
    ParamPoint.of(Fraction(1, 2), Fraction(-3, 7), Fraction(11, 6)),
    ParamPoint.of(Fraction(17, 9), Fraction(-8, 5), Fraction(-13, 11)),
    ParamPoint.of(Fraction(2, 13), Fraction(5, 9), Fraction(-7, 12)),
]


@pytest.fixture(scope="session")
def generic_points():
    return list(GENERIC_POINTS)

"""Terminating Gauss series and the exact pair quantities ell and r.

The central objects are, for a pair (n1, n2) with 1 <= n1 <= n2 and
M = 2*n2 - 2*n1, P = 2*n2 + 2*n1:

  variant 1:  ell = sum_i (-1)^i C(M,i) C(P,i)          r = (-1)^(n1+1) 2^(2*n2-2)
  variant 3:  ell = sum_i (-1)^i C(M,i) C(P,i) 3^(M-i)  r = -2^(4*n2-1)

Both sums are binomial expansions of terminating 2F1 values; `ell_via` exposes
four equivalent routes (direct definition, argument-flipped form, Pfaff
transform, Jacobi polynomial) whose agreement is part of the test surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .errors import (
    DegenerateAlpha,
    DegenerateC,
    DegenerateParameter,
    NonIntegerResult,
    NonTerminating,
)
from .exact_num import RationalLike, as_fraction, binomial, odd_double_factorial, pochhammer
from .poly_ratfunc import Poly

VARIANTS = (1, 3)
REPRESENTATIONS = ("definition", "flipped", "pfaff", "jacobi")


def _nonpositive_int(v: Fraction):
    if v.denominator == 1 and v <= 0:
        return int(v)
    return None


@dataclass(frozen=True)
class F21Instance:
    """A terminating Gauss series 2F1(a, b; c; x) with exact rational data."""

    a: Fraction
    b: Fraction
    c: Fraction
    x: Fraction

    @classmethod
    def of(cls, a: RationalLike, b: RationalLike, c: RationalLike, x: RationalLike) -> "F21Instance":
        return cls(as_fraction(a), as_fraction(b), as_fraction(c), as_fraction(x))

    def termination_index(self) -> int:
        """Index N of the last nonzero-capable term; validates the instance.

        Requires a or b to be a nonpositive integer; N is the smaller of the
        negations. The lower parameter must avoid 0, -1, ..., -(N-1), which
        would zero a denominator before the series stops.
        """
        stops = []
        for v in (self.a, self.b):
            np = _nonpositive_int(v)
            if np is not None:
                stops.append(-np)
        if not stops:
            raise NonTerminating(
                f"2F1({self.a}, {self.b}; {self.c}; {self.x}): neither upper parameter "
                "is a nonpositive integer"
            )
        n_stop = min(stops)
        c_int = _nonpositive_int(self.c)
        if c_int is not None and -c_int < n_stop:
            raise DegenerateC(
                f"2F1({self.a}, {self.b}; {self.c}; {self.x}): lower parameter hits zero "
                f"at term {-c_int + 1} before termination at {n_stop}"
            )
        return n_stop


def f21(inst: F21Instance) -> Fraction:
    """Exact value of a terminating Gauss series.

    Terms are accumulated with the one-step ratio
    term[n+1] = term[n] * (a+n)(b+n) x / ((c+n)(1+n)).
    """
    n_stop = inst.termination_index()
    total = Fraction(1)
    term = Fraction(1)
    for n in range(n_stop):
        term *= (inst.a + n) * (inst.b + n) * inst.x
        term /= (inst.c + n) * (n + 1)
        total += term
    return total


def f21v(a: RationalLike, b: RationalLike, c: RationalLike, x: RationalLike) -> Fraction:
    """Convenience wrapper building the instance inline."""
    return f21(F21Instance.of(a, b, c, x))


def f21_poly(a: RationalLike, b: RationalLike, c: RationalLike) -> Poly:
    """The terminating series as an exact polynomial in x."""
    inst = F21Instance.of(a, b, c, 1)
    n_stop = inst.termination_index()
    coeffs = [Fraction(1)]
    for n in range(n_stop):
        coeffs.append(coeffs[-1] * (inst.a + n) * (inst.b + n) / ((inst.c + n) * (n + 1)))
    return Poly(coeffs)


def f21_series(a: RationalLike, b: RationalLike, c: RationalLike, order: int) -> Poly:
    """Truncated series through degree `order`, no termination required.

    Valid whenever c avoids 0, -1, ..., -(order-1).
    """
    a, b, c = as_fraction(a), as_fraction(b), as_fraction(c)
    c_int = _nonpositive_int(c)
    if c_int is not None and -c_int < order:
        raise DegenerateC(f"series for 2F1(.,.;{c};x) breaks down at term {-c_int + 1}")
    coeffs = [Fraction(1)]
    for n in range(order):
        coeffs.append(coeffs[-1] * (a + n) * (b + n) / ((c + n) * (n + 1)))
    return Poly(coeffs)


# ---- Pair quantities ----


@dataclass(frozen=True)
class PairN:
    """Index pair (n1, n2) with 1 <= n1 <= n2."""

    n1: int
    n2: int

    def __post_init__(self):
        if not (1 <= self.n1 <= self.n2):
            raise DegenerateParameter(f"PairN({self.n1}, {self.n2}): need 1 <= n1 <= n2")

    @property
    def m_small(self) -> int:
        return 2 * self.n2 - 2 * self.n1

    @property
    def p_big(self) -> int:
        return 2 * self.n2 + 2 * self.n1

    def kappa(self) -> Tuple[int, int]:
        """The underlying even weights (4*n1, 4*n2)."""
        return 4 * self.n1, 4 * self.n2


def _check_variant(variant: int) -> None:
    if variant not in VARIANTS:
        raise DegenerateParameter(f"variant must be one of {VARIANTS}, got {variant}")


def ell_and_r(variant: int, pair: PairN) -> Tuple[int, int]:
    """Exact integers (ell, r) for the pair under the given variant.

    The sum runs over integers throughout: for variant 3 the power 3^(M-i)
    is folded into each term, so integrality is structural.
    """
    _check_variant(variant)
    m, p = pair.m_small, pair.p_big
    term = 1  # C(M,0) * C(P,0)
    if variant == 1:
        total = 0
        for i in range(m + 1):
            total += term if i % 2 == 0 else -term
            term = term * (m - i) * (p - i) // ((i + 1) * (i + 1))
        r = (1 if (pair.n1 + 1) % 2 == 0 else -1) * (1 << (2 * pair.n2 - 2))
        return total, r
    pow3 = 3 ** m
    total = 0
    for i in range(m + 1):
        total += term * pow3 if i % 2 == 0 else -term * pow3
        term = term * (m - i) * (p - i) // ((i + 1) * (i + 1))
        pow3 //= 3
    r = -(1 << (4 * pair.n2 - 1))
    return total, r


def jacobi_P(n: int, alpha: RationalLike, beta: RationalLike, x: RationalLike) -> Fraction:
    """Jacobi polynomial P_n^(alpha,beta)(x), exactly, via the Gauss series.

    P_n = (alpha+1)_n / n! * 2F1(-n, n+alpha+beta+1; alpha+1; (1-x)/2).
    Requires alpha outside {-1, ..., -n}.
    """
    if n < 0:
        raise DegenerateParameter(f"jacobi_P: degree {n} negative")
    alpha, beta, x = as_fraction(alpha), as_fraction(beta), as_fraction(x)
    ai = _nonpositive_int(alpha + 1)
    if ai is not None and -ai < n:
        raise DegenerateAlpha(f"jacobi_P: alpha = {alpha} in the degenerate set for degree {n}")
    front = pochhammer(alpha + 1, n) / math.factorial(n)
    return front * f21v(-n, n + alpha + beta + 1, alpha + 1, (1 - x) / 2)


def ell_via(variant: int, pair: PairN, rep: str) -> Fraction:
    """ell evaluated through one of four equivalent representations.

    rep in {"definition", "flipped", "pfaff", "jacobi"}. All four must agree
    with ell_and_r; each route exercises a different identity. The result is
    asserted integral.
    """
    _check_variant(variant)
    m, p = pair.m_small, pair.p_big
    four_n1 = 4 * pair.n1
    if rep == "definition":
        x = Fraction(-1) if variant == 1 else Fraction(-3)
        value = binomial(p, m) * f21v(-m, -m, four_n1 + 1, x)
    elif rep == "flipped":
        if variant == 1:
            value = f21v(-m, -p, 1, -1)
        else:
            value = Fraction(3) ** m * f21v(-m, -p, 1, Fraction(-1, 3))
    elif rep == "pfaff":
        if variant == 1:
            value = Fraction(2) ** m * f21v(-m, p + 1, 1, Fraction(1, 2))
        else:
            value = Fraction(4) ** m * f21v(-m, p + 1, 1, Fraction(1, 4))
    elif rep == "jacobi":
        if variant == 1:
            value = Fraction(2) ** m * jacobi_P(m, 0, four_n1, 0)
        else:
            value = Fraction(4) ** m * jacobi_P(m, 0, four_n1, Fraction(1, 2))
    else:
        raise DegenerateParameter(f"unknown representation {rep!r}")
    if value.denominator != 1:
        raise NonIntegerResult(
            f"ell via {rep} for {pair} variant {variant} came out {value}, not an integer"
        )
    return value


def check_flip_identity(pair: PairN) -> bool:
    """Polynomial identity tying the defining series to its argument-flipped form.

    C(P, M) * 2F1(-M, -M; 4*n1+1; x)  ==  (-x)^M * 2F1(-M, -P; 1; 1/x),
    compared coefficient-by-coefficient as exact polynomials.
    """
    m, p = pair.m_small, pair.p_big
    lhs = f21_poly(-m, -m, 4 * pair.n1 + 1).scale(binomial(p, m))
    flipped = f21_poly(-m, -p, 1)
    sign = 1 if m % 2 == 0 else -1
    rhs = Poly([sign * flipped.coeff(m - d) for d in range(m + 1)])
    return lhs == rhs


def closed_form_ell1_at_n1_zero(n2: int) -> Fraction:
    """Closed form for the variant-1 sum with the small index forced to zero:
    (-1)^n2 * (1*3*...*(2*n2-1)) * 2^n2 / n2!  (equals (-1)^n2 C(2*n2, n2))."""
    if n2 < 0:
        raise DegenerateParameter(f"n2 = {n2} negative")
    sign = 1 if n2 % 2 == 0 else -1
    return Fraction(sign * odd_double_factorial(n2) * 2 ** n2, math.factorial(n2))


def closed_form_shifted_lower(n2: int) -> Fraction:
    """Closed form for 2F1(-2*n2+1, -2*n2+1; 2; -1):
    (-1)^(n2+1) * (1*3*...*(2*n2-1)) * 2^(n2-2) / (n2! * n2)."""
    if n2 < 1:
        raise DegenerateParameter(f"n2 = {n2}: need n2 >= 1")
    sign = 1 if (n2 + 1) % 2 == 0 else -1
    return (
        sign
        * odd_double_factorial(n2)
        * Fraction(2) ** (n2 - 2)
        / (math.factorial(n2) * n2)
    )


def kummer_minus1(n_half: int, b: RationalLike) -> Fraction:
    """Kummer's x = -1 evaluation for even upper parameter a = -2N:

    2F1(-2N, b; -2N+1-b; -1) = 2^(2N) * (1/2 - N)_N / (-2N+1-b)_N.

    Raises DegenerateParameter when the left side is not a clean terminating
    instance governed by a = -2N, or when the right side's denominator
    vanishes.
    """
    n = n_half
    if n < 0:
        raise DegenerateParameter(f"kummer_minus1: N = {n} negative")
    b = as_fraction(b)
    b_int = _nonpositive_int(b)
    if b_int is not None and -b_int < 2 * n:
        raise DegenerateParameter(
            f"kummer_minus1: b = {b} terminates the series before index 2N = {2 * n}"
        )
    c = Fraction(-2 * n + 1) - b
    c_int = _nonpositive_int(c)
    if c_int is not None and -c_int < 2 * n:
        raise DegenerateParameter(
            f"kummer_minus1: lower parameter {c} degenerates before index {2 * n}"
        )
    denom = pochhammer(c, n)
    if denom == 0:
        raise DegenerateParameter(f"kummer_minus1: ({c})_{n} vanishes")
    return Fraction(4) ** n * pochhammer(Fraction(1 - 2 * n, 2), n) / denom

"""Dense univariate polynomials and rational functions over exact rationals.

Poly stores coefficients lowest-degree-first with no trailing zeros; the zero
polynomial is the empty tuple and reports degree -1. RatFunc keeps num/den
coprime with a monic denominator, so equal values have equal representations.

The gcd is a primitive (fraction-free) polynomial remainder sequence: clear
denominators, pseudo-divide over the integers, strip content each step. For
the denominators that dominate this package, products of powers of x and
(1 - x), normalization short-circuits to valuation counting.

    >>> p = Poly.of(1, 4, 1)          # 1 + 4x + x^2
    >>> p.eval(Fraction(-1))
    Fraction(-2, 1)
    >>> strip_x_and_1mx(Poly.of(0, 0, 3, -3))
    (2, 1, Poly.of(3))
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Tuple, Union

from .errors import DegenerateParameter, PoleAtPoint, ZeroPolynomial

Coeff = Union[int, Fraction]


def _trim(coeffs: Iterable[Coeff]) -> Tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class Poly:
    """Dense polynomial over Fraction, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Coeff] = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def of(cls, *coeffs: Coeff) -> "Poly":
        return cls(coeffs)

    @property
    def degree(self) -> int:
        """Degree, with -1 as the zero-polynomial sentinel."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    @property
    def lead(self) -> Fraction:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return Poly(out)

    def scale(self, k: Coeff) -> "Poly":
        k = Fraction(k)
        return Poly([c * k for c in self.coeffs])

    def shift_up(self, n: int) -> "Poly":
        """Multiply by x^n."""
        if self.is_zero:
            return self
        return Poly([Fraction(0)] * n + list(self.coeffs))

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x: Coeff) -> Fraction:
        x = Fraction(x)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def compose_affine(self, alpha: Coeff, beta: Coeff) -> "Poly":
        """Substitute x -> alpha*x + beta."""
        inner = Poly.of(beta, alpha)
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * inner + Poly.of(c)
        return out

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        return self.scale(1 / self.lead)

    def __divmod__(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if other.is_zero:
            raise ZeroPolynomial("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d = other.degree
        lead = other.lead
        for i in range(len(rem) - 1 - d, -1, -1):
            factor = rem[i + d] / lead
            if factor:
                q[i] = factor
                for j, c in enumerate(other.coeffs):
                    rem[i + j] -= factor * c
        return Poly(q), Poly(rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __repr__(self) -> str:
        return f"Poly.of({', '.join(_coeff_str(c) for c in self.coeffs)})" if self.coeffs else "Poly.of()"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = _coeff_str(mag)
            else:
                xpow = "x" if i == 1 else f"x^{i}"
                body = xpow if mag == 1 else f"{_coeff_str(mag)}*{xpow}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


def _coeff_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


ZERO = Poly()
ONE = Poly.of(1)
X = Poly.of(0, 1)
ONE_MINUS_X = Poly.of(1, -1)


def _int_primitive(coeffs: list) -> list:
    g = 0
    for c in coeffs:
        g = math.gcd(g, abs(c))
        if g == 1:
            return coeffs
    if g <= 1:
        return coeffs
    return [c // g for c in coeffs]


def _to_int_poly(p: Poly) -> list:
    lcm = 1
    for c in p.coeffs:
        lcm = lcm // math.gcd(lcm, c.denominator) * c.denominator
    return _int_primitive([int(c * lcm) for c in p.coeffs])


def _int_pseudo_rem(u: list, v: list) -> list:
    # u reduced mod v over the integers, scaling u by lc(v) before each
    # cancellation so no fractions appear. The extra content this introduces
    # is stripped by the primitive-part step in poly_gcd.
    u = list(u)
    while u and u[-1] == 0:
        u.pop()
    dv = len(v) - 1
    lead = v[-1]
    while len(u) - 1 >= dv:
        top = u[-1]
        shift = len(u) - 1 - dv
        for j in range(len(u)):
            u[j] *= lead
        for j, c in enumerate(v):
            u[shift + j] -= top * c
        while u and u[-1] == 0:
            u.pop()
    return u


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd via a primitive polynomial remainder sequence."""
    if p.is_zero:
        return q.monic()
    if q.is_zero:
        return p.monic()
    u, v = _to_int_poly(p), _to_int_poly(q)
    if len(u) < len(v):
        u, v = v, u
    while v:
        r = _int_pseudo_rem(u, v)
        u, v = v, _int_primitive(r)
    return Poly(u).monic()


def _valuation_at_zero(p: Poly) -> int:
    for i, c in enumerate(p.coeffs):
        if c != 0:
            return i
    raise ZeroPolynomial("valuation of the zero polynomial")


def _div_one_minus_x(coeffs: list) -> list:
    # Exact quotient by (1 - x); the caller has checked sum(coeffs) == 0.
    # From a_i = q_i - q_{i-1}: q_{n-1} = -a_n, then q_{i-1} = q_i - a_i.
    # Subtractions only, so no per-coefficient rational divisions.
    n = len(coeffs) - 1
    q = [Fraction(0)] * n
    q[n - 1] = -coeffs[n]
    for i in range(n - 1, 0, -1):
        q[i - 1] = q[i] - coeffs[i]
    return q


def _strip_poly(p: Poly) -> Tuple[int, int, Poly]:
    if p.is_zero:
        raise ZeroPolynomial("strip_x_and_1mx of the zero polynomial")
    v0 = _valuation_at_zero(p)
    coeffs = list(p.coeffs[v0:])
    v1 = 0
    while sum(coeffs) == 0:
        coeffs = _div_one_minus_x(coeffs)
        v1 += 1
    return v0, v1, Poly(coeffs)


class RatFunc:
    """Quotient of two Polys, kept coprime with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = ONE):
        if den.is_zero:
            raise ZeroPolynomial("rational function with zero denominator")
        if num.is_zero:
            object.__setattr__(self, "num", ZERO)
            object.__setattr__(self, "den", ONE)
            return
        num, den = _reduce(num, den)
        lead = den.lead
        if lead != 1:
            num = num.scale(1 / lead)
            den = den.scale(1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def of(cls, value: Union[int, Fraction, Poly]) -> "RatFunc":
        if isinstance(value, Poly):
            return cls(value)
        return cls(Poly.of(Fraction(value)))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num.coeffs, self.den.coeffs))

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero:
            raise ZeroPolynomial("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def scale(self, k: Coeff) -> "RatFunc":
        return RatFunc(self.num.scale(k), self.den)

    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def eval(self, x: Coeff) -> Fraction:
        x = Fraction(x)
        dv = self.den.eval(x)
        if dv == 0:
            raise PoleAtPoint(f"pole at x = {x}")
        return self.num.eval(x) / dv

    def compose_affine(self, alpha: Coeff, beta: Coeff) -> "RatFunc":
        return RatFunc(
            self.num.compose_affine(alpha, beta), self.den.compose_affine(alpha, beta)
        )

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc({self.num!r}, {self.den!r})"


_ONE_MINUS_X_POWS = {0: (Fraction(1),)}


def _one_minus_x_pow(j: int) -> Tuple[Fraction, ...]:
    # Coefficient tuple of (1-x)^j, memoized; the reduce path asks for the
    # same modest exponents thousands of times per operator walk.
    cached = _ONE_MINUS_X_POWS.get(j)
    if cached is None:
        prev = _one_minus_x_pow(j - 1)
        cached = tuple(
            (prev[i] if i <= j - 1 else Fraction(0))
            - (prev[i - 1] if i >= 1 else Fraction(0))
            for i in range(j + 1)
        )
        _ONE_MINUS_X_POWS[j] = cached
    return cached


def _scaled_pow_poly(s: int, t: int, c: Fraction) -> Poly:
    # c * x^s * (1-x)^t without any polynomial multiplication
    pow_c = _one_minus_x_pow(t)
    return Poly((Fraction(0),) * s + tuple(c * v for v in pow_c))


def _pow_shape(p: Poly) -> Union[Tuple[int, int, Fraction], None]:
    # Detect c * x^s * (1-x)^t; returns (s, t, c) or None. The x^s coefficient
    # of such a product is c itself, so one cached comparison settles it.
    if p.is_zero:
        return None
    s = _valuation_at_zero(p)
    t = p.degree - s
    c = p.coeff(s)
    pow_c = _one_minus_x_pow(t)
    for i in range(1, t + 1):
        if p.coeff(s + i) != c * pow_c[i]:
            return None
    return s, t, c


def _reduce(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    shape = _pow_shape(den)
    if shape is not None:
        s, t, c = shape
        v0 = _valuation_at_zero(num)
        k0 = min(s, v0)
        # cancel only what the denominator holds; any remaining x or (1-x)
        # content of the numerator stays folded in, preserving coprimality
        coeffs = list(num.coeffs[k0:])
        k1 = 0
        while k1 < t and sum(coeffs) == 0:
            coeffs = _div_one_minus_x(coeffs)
            k1 += 1
        return Poly(coeffs), _scaled_pow_poly(s - k0, t - k1, c)
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = num // g
        den = den // g
    return num, den


RF_ZERO = RatFunc(ZERO)
RF_ONE = RatFunc(ONE)


def strip_x_and_1mx(p: Union[Poly, RatFunc]):
    """Factor out powers of x and (1-x).

    For a Poly, returns (v0, v1, core) with v0, v1 >= 0 and core(0) != 0,
    core(1) != 0. For a RatFunc the valuations are signed (negative = pole)
    and the core is a RatFunc whose num and den avoid 0 and 1 as roots.
    """
    if isinstance(p, Poly):
        return _strip_poly(p)
    if p.is_zero:
        raise ZeroPolynomial("strip_x_and_1mx of the zero rational function")
    n0, n1, ncore = _strip_poly(p.num)
    d0, d1, dcore = _strip_poly(p.den)
    return n0 - d0, n1 - d1, RatFunc(ncore, dcore)

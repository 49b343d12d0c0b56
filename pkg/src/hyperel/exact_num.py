"""Exact scalar layer: rationals, Pochhammer symbols, primes, certified bounds.

Everything here is exact. Rational values are `fractions.Fraction`; prime
counting is a bit sieve with a cumulative table; the Dusart-style bounds on the
prime counting function are returned as exact rationals certified in a stated
direction, with the logarithm evaluated to a rigorous rational enclosure.

Usage:
    >>> pochhammer(Fraction(3), -2)
    Fraction(1, 2)
    >>> table = PrimeTable.build(1000)
    >>> table.pi(599)
    109
    >>> dusart_bound(Fraction(599), "lower").value < 109
    True
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from itertools import accumulate
from fractions import Fraction
from typing import Optional, Tuple, Union

from .errors import DegenerateParameter, OutOfDomain, TableTooSmall

RationalLike = Union[int, str, Fraction]

# Constants of the two prime-counting inequalities, valid for x >= 599:
#   pi(x) >= x/log x * (1 + 0.922/log x)      (lower)
#   pi(x) <= x/log x * (1 + 1.2762/log x)     (upper)
DUSART_X_MIN = 599
DUSART_LOWER_C = Fraction(922, 1000)
DUSART_UPPER_C = Fraction(12762, 10000)


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce int / 'p/q' string / Fraction to Fraction."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def pochhammer(a: RationalLike, n: int) -> Fraction:
    """Rising factorial (a)_n for integer n of either sign.

    (a)_0 = 1; (a)_n = a(a+1)...(a+n-1) for n > 0; for n < 0 the reciprocal
    identity (a)_n = 1/((a+n)_{-n}) applies, which requires none of
    a-1, a-2, ..., a+n to vanish.
    """
    a = as_fraction(a)
    if n >= 0:
        out = Fraction(1)
        for i in range(n):
            out *= a + i
        return out
    down = pochhammer(a + n, -n)
    if down == 0:
        raise DegenerateParameter(
            f"pochhammer({a}, {n}): a factor in the descending product is zero"
        )
    return 1 / down


def binomial(n: int, k: int) -> int:
    """Binomial coefficient with the usual convention C(n, k) = 0 outside 0 <= k <= n."""
    if n < 0:
        raise DegenerateParameter(f"binomial({n}, {k}): n must be nonnegative")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def odd_double_factorial(n: int) -> int:
    """Product 1*3*5*...*(2n-1); equals (2n)! / (2^n n!). Returns 1 for n = 0."""
    if n < 0:
        raise DegenerateParameter(f"odd_double_factorial({n}): n must be nonnegative")
    return math.prod(range(1, 2 * n, 2))


# ---- Prime table ----


@dataclass(frozen=True)
class PrimeTable:
    """Sieve of Eratosthenes up to `limit` with a cumulative prime-count table."""

    limit: int
    _flags: bytes            # _flags[n] == 1 iff n is prime, n <= limit
    _counts: array           # _counts[n] == pi(n)

    @classmethod
    def build(cls, limit: int) -> "PrimeTable":
        if limit < 2:
            raise DegenerateParameter(f"PrimeTable.build({limit}): limit must be >= 2")
        flags = bytearray(b"\x01") * (limit + 1)
        flags[0] = flags[1] = 0
        for p in range(2, math.isqrt(limit) + 1):
            if flags[p]:
                flags[p * p :: p] = bytes((limit - p * p) // p + 1)
        counts = array("q", accumulate(flags))
        return cls(limit=limit, _flags=bytes(flags), _counts=counts)

    def is_prime(self, n: int) -> bool:
        if n > self.limit:
            raise TableTooSmall(f"is_prime({n}) beyond sieve limit {self.limit}")
        return n >= 2 and self._flags[n] == 1

    def pi(self, x: int) -> int:
        """Number of primes <= x. Raises TableTooSmall past the sieve limit."""
        if x > self.limit:
            raise TableTooSmall(f"pi({x}) beyond sieve limit {self.limit}")
        if x < 2:
            return 0
        return self._counts[x]


def prime_in_open_interval(lo: int, hi: int, table: PrimeTable) -> Optional[int]:
    """Smallest prime p with lo < p < hi, or None if the interval holds none."""
    if hi - 1 > table.limit:
        raise TableTooSmall(
            f"prime_in_open_interval({lo}, {hi}) needs sieve limit >= {hi - 1}, have {table.limit}"
        )
    for p in range(max(lo + 1, 2), hi):
        if table._flags[p]:
            return p
    return None


# ---- Certified logarithm enclosure and prime-count bounds ----


def _ln2_enclosure(terms: int) -> Tuple[Fraction, Fraction]:
    # ln 2 = sum_{k>=1} 1/(k 2^k); tail after N terms is below 1/((N+1) 2^N).
    s = Fraction(0)
    for k in range(1, terms + 1):
        s += Fraction(1, k * (1 << k))
    return s, s + Fraction(1, (terms + 1) * (1 << terms))


def _atanh_ln_enclosure(m: Fraction, terms: int) -> Tuple[Fraction, Fraction]:
    # ln m = 2 atanh(t), t = (m-1)/(m+1) in [0, 1/3) for m in [1, 2).
    # Partial sums underestimate (all terms positive); the tail after index J
    # is below 2 t^(2J+3) / ((2J+3)(1 - t^2)).
    t = (m - 1) / (m + 1)
    if t == 0:
        return Fraction(0), Fraction(0)
    t2 = t * t
    s = Fraction(0)
    power = t
    for j in range(terms):
        s += power / (2 * j + 1)
        power *= t2
    lo = 2 * s
    tail = 2 * power / ((2 * terms + 1) * (1 - t2))
    return lo, lo + tail


def _round_down_dyadic(v: Fraction, bits: int) -> Fraction:
    return Fraction((v.numerator << bits) // v.denominator, 1 << bits)


def _round_up_dyadic(v: Fraction, bits: int) -> Fraction:
    return Fraction(-((-v.numerator << bits) // v.denominator), 1 << bits)


def log_enclosure(x: Fraction, rel_bits: int = 64) -> Tuple[Fraction, Fraction]:
    """Certified rational enclosure lo <= ln x <= hi for rational x > 1.

    Width shrinks below 2^-rel_bits of the value; precision doubles until the
    target is met. The endpoints are rounded outward to dyadics of bounded
    size: the raw series sums drag along denominators with thousands of
    digits, which the enclosure property does not need.
    """
    x = as_fraction(x)
    if x <= 1:
        raise OutOfDomain(f"log_enclosure({x}): need x > 1")
    # Reduce x = 2^e * m with m in [1, 2).
    e = 0
    m = x
    while m >= 2:
        m /= 2
        e += 1
    terms = 16
    while True:
        ln2_lo, ln2_hi = _ln2_enclosure(terms)
        m_lo, m_hi = _atanh_ln_enclosure(m, terms)
        lo = e * ln2_lo + m_lo
        hi = e * ln2_hi + m_hi
        if lo > 0 and (hi - lo) * (1 << rel_bits) <= lo:
            keep = 2 * rel_bits
            return _round_down_dyadic(lo, keep), _round_up_dyadic(hi, keep)
        terms *= 2


@dataclass(frozen=True)
class CertifiedBound:
    """Exact rational bound on a prime-count expression, with its direction.

    direction == "lower": value <= pi(x) is guaranteed.
    direction == "upper": value >= pi(x) is guaranteed.
    """

    x: Fraction
    direction: str
    value: Fraction


def dusart_bound(x: RationalLike, direction: str, rel_bits: int = 64) -> CertifiedBound:
    """Certified bound on pi(x) for rational x >= 599.

    The bounding expression x/L (1 + c/L), L = ln x, is strictly decreasing in
    L, so the lower bound evaluates it at the upper end of the log enclosure
    (rounding down) and the upper bound at the lower end (rounding up).
    """
    x = as_fraction(x)
    if x < DUSART_X_MIN:
        raise OutOfDomain(f"dusart_bound({x}): certified only for x >= {DUSART_X_MIN}")
    if direction not in ("lower", "upper"):
        raise DegenerateParameter(f"dusart_bound: unknown direction {direction!r}")
    log_lo, log_hi = log_enclosure(x, rel_bits=rel_bits)
    if direction == "lower":
        ln = log_hi
        c = DUSART_LOWER_C
    else:
        ln = log_lo
        c = DUSART_UPPER_C
    value = x / ln * (1 + c / ln)
    return CertifiedBound(x=x, direction=direction, value=value)

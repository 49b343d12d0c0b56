"""Dense exact polynomials and rational functions."""

import random
from fractions import Fraction

import pytest

from hyperel import Poly, RatFunc, ZeroPolynomial, poly_gcd, strip_x_and_1mx
from hyperel.poly_ratfunc import ONE, X, ZERO


def rand_poly(rng, deg, denom=6):
    return Poly(
        Fraction(rng.randint(-9, 9), rng.randint(1, denom)) for _ in range(deg + 1)
    )


def test_poly_construction_and_trim():
    p = Poly.of(1, 2, 0, 0)
    assert p.degree == 1
    assert p.coeff(0) == 1 and p.coeff(1) == 2 and p.coeff(5) == 0
    assert Poly().is_zero
    assert Poly.of(0, 0).is_zero
    assert Poly.of(0, 0).degree == -1


def test_poly_arithmetic():
    p = Poly.of(1, 1)  # 1 + x
    q = Poly.of(-1, 1)  # -1 + x
    assert p + q == Poly.of(0, 2)
    assert p - p == ZERO
    assert p * q == Poly.of(-1, 0, 1)
    assert (-p) == Poly.of(-1, -1)
    assert p.scale(3) == Poly.of(3, 3)
    assert p.shift_up(2) == Poly.of(0, 0, 1, 1)


def test_poly_ring_axioms_random():
    rng = random.Random(11)
    for _ in range(60):
        a = rand_poly(rng, rng.randint(0, 4))
        b = rand_poly(rng, rng.randint(0, 4))
        c = rand_poly(rng, rng.randint(0, 4))
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        x0 = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        assert (a * b).eval(x0) == a.eval(x0) * b.eval(x0)


def test_poly_derivative_and_eval():
    p = Poly.of(5, -3, 0, 2)  # 5 - 3x + 2x^3
    assert p.derivative() == Poly.of(-3, 0, 6)
    assert p.eval(2) == 15
    assert p.eval(Fraction(1, 2)) == Fraction(15, 4)
    assert ZERO.derivative() == ZERO


def test_poly_compose_affine():
    p = Poly.of(0, 0, 1)  # x^2
    assert p.compose_affine(2, 3) == Poly.of(9, 12, 4)  # (2x+3)^2
    q = Poly.of(1, 1)
    assert q.compose_affine(-1, 1) == Poly.of(2, -1)  # 1 + (1-x)


def test_poly_divmod_random():
    rng = random.Random(17)
    for _ in range(50):
        b = rand_poly(rng, rng.randint(0, 3))
        if b.is_zero:
            continue
        a = rand_poly(rng, rng.randint(0, 5))
        q, r = divmod(a, b)
        assert a == q * b + r
        assert r.is_zero or r.degree < b.degree


def test_poly_divmod_by_zero():
    with pytest.raises(ZeroPolynomial):
        divmod(Poly.of(1, 2), ZERO)


def test_poly_gcd():
    # gcd((x-1)(x+2), (x-1)(x-3)) = x - 1 up to normalization
    a = Poly.of(-2, 1, 1)
    b = Poly.of(3, -4, 1)
    g = poly_gcd(a, b)
    assert g.monic() == Poly.of(-1, 1)
    assert poly_gcd(a, ZERO).monic() == a.monic()
    assert poly_gcd(ZERO, ZERO).is_zero


def test_poly_gcd_random_divides():
    rng = random.Random(23)
    for _ in range(40):
        a = rand_poly(rng, rng.randint(1, 4))
        b = rand_poly(rng, rng.randint(1, 4))
        g = poly_gcd(a, b)
        if g.is_zero:
            assert a.is_zero and b.is_zero
            continue
        assert (a % g).is_zero
        assert (b % g).is_zero


def test_strip_poly():
    # x^2 (1-x) (2 + x)
    core = Poly.of(2, 1)
    p = Poly.of(0, 0, 1) * Poly.of(1, -1) * core
    v0, v1, got = strip_x_and_1mx(p)
    assert (v0, v1) == (2, 1)
    assert got.monic() == core.monic()
    v0, v1, got = strip_x_and_1mx(Poly.of(3))
    assert (v0, v1) == (0, 0) and got == Poly.of(3)
    with pytest.raises(ZeroPolynomial):
        strip_x_and_1mx(ZERO)


def test_ratfunc_normalization():
    # (x^2 - 1)/(x - 1) reduces to x + 1
    f = RatFunc(Poly.of(-1, 0, 1), Poly.of(-1, 1))
    assert f == RatFunc(Poly.of(1, 1))
    assert f.den == ONE
    # denominator is kept monic
    g = RatFunc(Poly.of(1), Poly.of(0, 2))
    assert g.den == X
    assert g.num == Poly.of(Fraction(1, 2))


def test_ratfunc_arithmetic():
    f = RatFunc(ONE, X)  # 1/x
    g = RatFunc(X)
    assert f * g == RatFunc(ONE)
    assert f + f == RatFunc(Poly.of(2), X)
    assert (f - f).is_zero
    h = f / g  # 1/x^2
    assert h == RatFunc(ONE, Poly.of(0, 0, 1))
    with pytest.raises(ZeroPolynomial):
        f / RatFunc(ZERO)


def test_ratfunc_field_axioms_random():
    rng = random.Random(31)
    for _ in range(40):
        fn = rand_poly(rng, rng.randint(0, 3))
        fd = rand_poly(rng, rng.randint(0, 2))
        gn = rand_poly(rng, rng.randint(0, 3))
        gd = rand_poly(rng, rng.randint(0, 2))
        if fd.is_zero or gd.is_zero:
            continue
        f = RatFunc(fn, fd)
        g = RatFunc(gn, gd)
        assert f + g == g + f
        assert f * g == g * f
        if not g.is_zero:
            assert (f / g) * g == f


def test_ratfunc_derivative_quotient_rule():
    f = RatFunc(Poly.of(0, 1), Poly.of(1, 1))  # x/(1+x)
    assert f.derivative() == RatFunc(ONE, Poly.of(1, 2, 1))
    rng = random.Random(37)
    for _ in range(20):
        a = rand_poly(rng, 2)
        b = rand_poly(rng, 2)
        if b.is_zero:
            continue
        g = RatFunc(a, b)
        prod = g * g
        assert prod.derivative() == g.derivative() * g + g * g.derivative()


def test_ratfunc_eval_and_pole():
    f = RatFunc(ONE, Poly.of(-1, 1))  # 1/(x-1)
    assert f.eval(3) == Fraction(1, 2)
    from hyperel import PoleAtPoint

    with pytest.raises(PoleAtPoint):
        f.eval(1)


def test_strip_ratfunc_signed():
    # x / (1-x)^2 has valuations (1, -2)
    f = RatFunc(X, Poly.of(1, -1) * Poly.of(1, -1))
    v0, v1, core = strip_x_and_1mx(f)
    assert (v0, v1) == (1, -2)
    assert core == RatFunc(ONE)
    with pytest.raises(ZeroPolynomial):
        strip_x_and_1mx(RatFunc(ZERO))

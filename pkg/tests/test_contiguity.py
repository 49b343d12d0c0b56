"""Contiguity engine: step operators, reduction, three-term data, structure."""

import random
from fractions import Fraction

import pytest

from hyperel import (
    DegenerateParameter,
    DiffOp,
    IntegralityViolation,
    NonTerminatingFactor,
    PairN,
    ParamPoint,
    ShiftTriple,
    build_H,
    compose,
    ell_and_r,
    f21v,
    make_L,
    ore_right_divide,
    pair_reduction_at_minus1,
    q0_case_i_formula,
    q0_case_i_series,
    step_operator,
    structure_check,
    three_term_QR,
    three_term_for,
)
from hyperel.contiguity import (
    CASE_IDS,
    STEP_SHIFTS,
    _alt_step_sequence,
    _reduced_remainder,
    classify,
    predicted_structure,
    step_action_factor,
    step_sequence,
)
from hyperel.hyper_core import f21_poly, f21_series
from hyperel.poly_ratfunc import ONE, RatFunc, strip_x_and_1mx

F = Fraction

TERMINATING_POINT = ParamPoint.of(-4, F(3, 2), F(7, 3))


def terminating_points(rng, count, min_depth=7):
    """Parameter points whose a is a nonpositive integer deep enough that every
    shifted instance in a [-3,3] box still terminates. Noninteger b, c, c-b
    keep all contiguity steps defined along the walk."""
    pts = []
    while len(pts) < count:
        a = F(-rng.randint(min_depth, min_depth + 8))
        b = F(rng.randint(-40, 40), rng.randint(2, 9))
        c = F(rng.randint(-40, 40), rng.randint(2, 9))
        if b.denominator == 1 or c.denominator == 1 or (c - b).denominator == 1:
            continue
        pts.append(ParamPoint(a, b, c))
    return pts


# ---- operator layer ----


def test_diffop_construction():
    ident = DiffOp.identity()
    assert ident.order == 0
    assert ident.coeff(0) == RatFunc(ONE)
    d = DiffOp.partial()
    assert d.order == 1 and d.coeff(0).is_zero
    assert DiffOp().is_zero
    assert DiffOp().order == -1


def test_diffop_apply_product_of_rules():
    d = DiffOp.partial()
    f = RatFunc(f21_poly(-3, F(1, 2), F(5, 3)))
    assert d.apply(f) == f.derivative()
    theta = DiffOp.theta()
    from hyperel.poly_ratfunc import X

    assert theta.apply(f) == RatFunc(X) * f.derivative()


def test_compose_matches_sequential_application():
    rng = random.Random(7)
    p = TERMINATING_POINT
    ops = [step_operator(w, p) for w in ("H1", "H2", "H3")]
    f = RatFunc(f21_poly(p.a, p.b, p.c))
    combined = compose(ops[0], compose(ops[1], ops[2]))
    assert combined.apply(f) == ops[0].apply(ops[1].apply(ops[2].apply(f)))


def test_step_operators_shift_the_series():
    p = TERMINATING_POINT
    base = RatFunc(f21_poly(p.a, p.b, p.c))
    for which, (da, db, dc) in STEP_SHIFTS.items():
        op = step_operator(which, p)
        factor = step_action_factor(which, p)
        shifted = RatFunc(f21_poly(p.a + da, p.b + db, p.c + dc))
        assert op.apply(base) == shifted.scale(factor), which


def test_step_operator_degenerate_points():
    # lowering a from 1 divides by 1 - a = 0
    with pytest.raises(DegenerateParameter):
        step_operator("B1", ParamPoint.of(1, F(1, 2), F(1, 3)))
    # raising c when c = a divides by c - a = 0
    with pytest.raises(DegenerateParameter):
        step_operator("H3", ParamPoint.of(F(1, 2), F(1, 3), F(1, 2)))
    # the 1/c in the raise-c action is a separate hazard
    with pytest.raises(DegenerateParameter):
        step_action_factor("H3", ParamPoint.of(-2, F(1, 2), 0))
    with pytest.raises(DegenerateParameter):
        step_operator("??", TERMINATING_POINT)


def test_build_H_trivial_and_single_step():
    p = TERMINATING_POINT
    assert build_H(ShiftTriple.of(0, 0, 0), p) == DiffOp.identity()
    assert build_H(ShiftTriple.of(0, 0, 1), p) == step_operator("H3", p)
    assert build_H(ShiftTriple.of(0, 1, 0), p) == step_operator("H2", p)


def test_build_H_applies_as_scaled_shift():
    # the composed operator maps the base series to a multiple of the target
    rng = random.Random(19)
    for p in terminating_points(rng, 3):
        for klm in [(1, 1, 1), (-1, 2, 0), (-2, 0, -1), (2, 3, 1)]:
            sh = ShiftTriple.of(*klm)
            h = build_H(sh, p)
            base = RatFunc(f21_poly(p.a, p.b, p.c))
            target = RatFunc(f21_poly(p.a + sh.k, p.b + sh.l, p.c + sh.m))
            got = h.apply(base)
            # collect the product of per-step factors by walking the sequence
            factor = F(1)
            q = p
            for which in step_sequence(sh):
                factor *= step_action_factor(which, q)
                da, db, dc = STEP_SHIFTS[which]
                q = q.shifted(da, db, dc)
            assert got == target.scale(factor), klm


def test_ore_right_divide_reexpands():
    p = TERMINATING_POINT
    L = make_L(p)
    for klm in [(1, 1, 1), (-1, 2, 0), (-2, 2, -1)]:
        sh = ShiftTriple.of(*klm)
        H = build_H(sh, p)
        quotient, q, r = ore_right_divide(H, L)
        rebuilt = compose(quotient, L) + DiffOp([r, q])
        assert rebuilt == H, klm


def test_ore_right_divide_guards():
    with pytest.raises(DegenerateParameter):
        ore_right_divide(DiffOp.partial(), DiffOp.partial())


def test_incremental_reduction_matches_full_division():
    p = TERMINATING_POINT
    L = make_L(p)
    for klm in [(-1, -1, 0), (1, 1, 1), (2, 2, 1), (-2, 1, -1)]:
        sh = ShiftTriple.of(*klm)
        seq = step_sequence(sh)
        q_inc, r_inc = _reduced_remainder(sh, p, seq)
        _, q_full, r_full = ore_right_divide(build_H(sh, p, seq), L)
        assert q_inc == q_full and r_inc == r_full, klm


# ---- shift taxonomy ----


def test_shift_triple_ordering_guard():
    with pytest.raises(DegenerateParameter):
        ShiftTriple.of(2, 1, 0)
    sh = ShiftTriple.of(-3, 2, 1)
    assert (sh.k, sh.l, sh.m) == (-3, 2, 1)


def test_classification_rules():
    assert classify(1, 1, 1) == "i"  # m >= 1, m-k-l <= -1
    assert classify(0, 1, 1) == "ii"  # m >= 1, m-k-l >= 0
    assert classify(1, 1, 0) == "iii"  # m <= 0, m-k-l <= -1
    assert classify(0, 0, 0) == "iv"
    assert classify(-1, -1, 0) == "iv"
    for k in range(-3, 4):
        for l in range(k, 4):
            for m in range(-3, 4):
                assert classify(k, l, m) in CASE_IDS


def test_predicted_structure_samples():
    assert predicted_structure(0, 0, 0) == ((1, 1, -1), (0, 0, 0))
    assert predicted_structure(1, 1, 1) == ((0, 0, 0), (0, 0, -1))
    # degree -1 encodes an identically zero coefficient


# ---- three-term data ----


def test_three_term_against_series_sample():
    rng = random.Random(41)
    pts = terminating_points(rng, 4)
    x = F(2, 5)
    for p in pts:
        for klm in [(1, 1, 1), (-1, 2, -1), (0, 3, 2), (-3, -2, -3), (2, 2, 0)]:
            sh = ShiftTriple.of(*klm)
            Q, R = three_term_QR(sh, p)
            lhs = f21v(p.a + sh.k, p.b + sh.l, p.c + sh.m, x)
            rhs = Q.eval(x) * f21v(p.a + 1, p.b + 1, p.c + 1, x) + R.eval(x) * f21v(
                p.a, p.b, p.c, x
            )
            assert lhs == rhs, (klm, p)


def test_three_term_path_independence():
    rng = random.Random(43)
    pts = terminating_points(rng, 2)
    for p in pts:
        for klm in [(1, 2, 1), (-2, -1, 1), (1, 3, -2), (-1, 0, 2)]:
            sh = ShiftTriple.of(*klm)
            canonical = _reduced_remainder(sh, p, step_sequence(sh))
            reversed_order = _reduced_remainder(sh, p, _alt_step_sequence(sh))
            assert canonical == reversed_order, klm


def test_three_term_for_swaps_upper_shifts():
    # k > l is served by symmetry in the upper parameters
    p = ParamPoint.of(F(13, 7), F(23, 11), F(31, 13))
    Qs, Rs = three_term_for(3, 1, 1, p)
    pswap = ParamPoint(p.b, p.a, p.c)
    Qd, Rd = three_term_QR(ShiftTriple.of(1, 3, 1), pswap)
    assert Qs == Qd and Rs == Rd


def test_three_term_uniqueness_two_point():
    # (Q, R) is pinned by its values against two independent series; evaluate
    # the relation at two x values and solve the 2x2 system back out.
    p = TERMINATING_POINT
    sh = ShiftTriple.of(1, 2, 1)
    Q, R = three_term_QR(sh, p)
    for x in (F(2, 7), F(-3, 5)):
        lhs = f21v(p.a + sh.k, p.b + sh.l, p.c + sh.m, x)
        up = f21v(p.a + 1, p.b + 1, p.c + 1, x)
        base = f21v(p.a, p.b, p.c, x)
        assert lhs == Q.eval(x) * up + R.eval(x) * base


# ---- structure reporting ----


def test_structure_tables_full_grid_one_point():
    p = ParamPoint.of(F(13, 7), F(23, 11), F(31, 13))
    for k in range(-3, 4):
        for l in range(k, 4):
            for m in range(-3, 4):
                rep = structure_check(ShiftTriple.of(k, l, m), p)
                assert rep.matches, (k, l, m, rep)


def test_structure_requires_generic_point():
    with pytest.raises(DegenerateParameter):
        structure_check(ShiftTriple.of(1, 1, 1), ParamPoint.of(-2, -2, 1))


# ---- first-raise closed forms ----


def first_raise_closed_forms(p):
    """Rational-function forms of (Q, R) for the shift (-1, -1, 0)."""
    from hyperel.poly_ratfunc import Poly

    a, b, c = p.a, p.b, p.c
    qnum = Poly.of(0, 1, -1).scale(a * b * (c + 1 - a - b))  # x(1-x) scaled
    qden = (c - a) * (c - b) * c
    Q = RatFunc(qnum).scale(F(1) / qden)
    rnum = Poly.of(
        (c - a) * (c - b),
        a * a + b * b - (a + b) * (c + 1) + a * b + c,
    )
    R = RatFunc(rnum).scale(F(1) / ((c - a) * (c - b)))
    return Q, R


def test_first_raise_matches_closed_forms_generic(generic_points):
    sh = ShiftTriple.of(-1, -1, 0)
    for p in generic_points:
        Q, R = three_term_QR(sh, p)
        Qc, Rc = first_raise_closed_forms(p)
        assert Q == Qc and R == Rc, p


def test_first_raise_values_at_minus_one():
    p = ParamPoint.of(-2, -2, 1)
    Q, R = three_term_QR(ShiftTriple.of(-1, -1, 0), p)
    assert Q.eval(F(-1)) == F(-16, 3)
    assert R.eval(F(-1)) == F(-4, 3)
    # consistency: the relation closes on the three series values at x = -1
    assert f21v(-3, -3, 1, -1) == 0
    assert F(-16, 3) * f21v(-1, -1, 2, -1) + F(-4, 3) * f21v(-2, -2, 1, -1) == 0


# ---- the case-(i) product expression for q ----


def test_q0_series_matches_engine_core(generic_points):
    for p in generic_points[:3]:
        for klm in [(1, 1, 1), (1, 2, 1), (2, 2, 1), (1, 3, 2)]:
            sh = ShiftTriple.of(*klm)
            q, _ = _reduced_remainder(sh, p, step_sequence(sh))
            _, _, core = strip_x_and_1mx(q)
            series = q0_case_i_series(sh, p, 10)
            assert RatFunc(series) == core, (klm, p)


def test_q0_series_constant_across_points():
    # same expression, evaluated at two x values, gives one constant ratio
    p = ParamPoint.of(F(13, 7), F(23, 11), F(31, 13))
    sh = ShiftTriple.of(1, 2, 1)
    series = q0_case_i_series(sh, p, 8)
    q, _ = _reduced_remainder(sh, p, step_sequence(sh))
    _, _, core = strip_x_and_1mx(q)
    for x in (F(3, 7), F(-2, 9)):
        assert series.eval(x) == core.eval(x)


def test_q0_formula_requires_case_i():
    with pytest.raises(DegenerateParameter):
        q0_case_i_formula(ShiftTriple.of(0, 0, 0), TERMINATING_POINT, F(1, 2))


def test_q0_formula_requires_terminating_factors():
    # generic parameters leave all four factors infinite
    p = ParamPoint.of(F(13, 7), F(23, 11), F(31, 13))
    with pytest.raises(NonTerminatingFactor):
        q0_case_i_formula(ShiftTriple.of(1, 1, 1), p, F(1, 2))


def test_q0_formula_no_valid_specialization_small_search():
    # for the unit raise in all three slots, every small rational
    # specialization either fails termination or degenerates
    sh = ShiftTriple.of(1, 1, 1)
    values = [F(n, 1) for n in range(-4, 5)] + [F(1, 2), F(-3, 2), F(5, 2)]
    outcomes = set()
    for a in values:
        for b in values:
            for c in values:
                try:
                    q0_case_i_formula(sh, ParamPoint(a, b, c), F(1, 3))
                    outcomes.add("value")
                except NonTerminatingFactor:
                    outcomes.add("nonterminating")
                except DegenerateParameter:
                    outcomes.add("degenerate")
    assert "value" not in outcomes
    assert outcomes == {"nonterminating", "degenerate"}


# ---- reduction of the special-value pairs at x = -1 ----


def test_pair_reduction_frozen_values():
    expect = {
        (1, 1): (F(16, 3), F(5, 6), -16, 20),
        (1, 2): (F(32, 5), F(22, 15), -72, 528),
        (2, 2): (F(-1024, 35), F(-733, 210), 36864, -140736),
        (2, 3): (F(32, 7), F(-193, 210), -115200, -1667520),
    }
    for (n1, n2), (qpp, rpp, q0pp, r0pp) in expect.items():
        red = pair_reduction_at_minus1(PairN(n1, n2))
        assert red.Qpp == qpp and red.Rpp == rpp
        assert red.Q0pp == q0pp and red.R0pp == r0pp
        assert isinstance(red.Q0pp, int) and isinstance(red.R0pp, int)


def test_pair_reduction_reassembles_ell():
    from hyperel import closed_form_ell1_at_n1_zero, closed_form_shifted_lower

    for n2 in range(1, 11):
        for n1 in range(1, n2 + 1):
            red = pair_reduction_at_minus1(PairN(n1, n2))
            ell, _ = ell_and_r(1, PairN(n1, n2))
            lower = closed_form_shifted_lower(n2)
            base = closed_form_ell1_at_n1_zero(n2)
            assert red.Qpp * lower + red.Rpp * base == ell, (n1, n2)

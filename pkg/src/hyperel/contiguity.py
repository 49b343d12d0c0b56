"""Contiguity operators, Ore right-division, and three-term relations.

The second-order annihilator of the Gauss series,

    L(a,b,c) = d^2 + (c - (a+b+1)x)/(x(1-x)) d - ab/(x(1-x)),   d = d/dx,

admits six first-order contiguity operators stepping a, b, or c by one. A
composition H realizing the shift (k, l, m) satisfies

    H f(a,b;c;x) = (a)_k (b)_l / (c)_m * f(a+k, b+l; c+m; x)

on the family, and right-division H = p(d) L + q(x) d + r(x) turns it into a
three-term relation

    f(a+k,b+l;c+m;x) = Q(x) f(a+1,b+1;c+1;x) + R(x) f(a,b;c;x)

using d f = (ab/c) f(a+1,b+1;c+1;x). The stripped shapes of q and r
(power of x, power of (1-x), core degree) follow closed tables keyed by the
quadrant of (k, l, m); `structure_check` compares engine output against them.

All arithmetic is exact over rational functions in ℚ(x); a, b, c are exact
rational numbers, not symbols.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .errors import (
    DegenerateC,
    DegenerateParameter,
    IntegralityViolation,
    NonTerminatingFactor,
)
from .exact_num import RationalLike, as_fraction, pochhammer
from .hyper_core import PairN, _nonpositive_int, ell_and_r, f21_series, f21v
from .poly_ratfunc import (
    ONE,
    ONE_MINUS_X,
    RF_ONE,
    RF_ZERO,
    Poly,
    RatFunc,
    X,
    strip_x_and_1mx,
)

X_1MX = X * ONE_MINUS_X  # x(1-x), the common denominator of L


@dataclass(frozen=True)
class ParamPoint:
    """Exact rational parameter triple (a, b, c) with degeneracy flags."""

    a: Fraction
    b: Fraction
    c: Fraction

    @classmethod
    def of(cls, a: RationalLike, b: RationalLike, c: RationalLike) -> "ParamPoint":
        return cls(as_fraction(a), as_fraction(b), as_fraction(c))

    def shifted(self, da: int, db: int, dc: int) -> "ParamPoint":
        return ParamPoint(self.a + da, self.b + db, self.c + dc)

    def degeneracy_flags(self) -> dict:
        """Which of a, b, c, c-a, c-b, a-b are integers (specialization hazards)."""
        vals = {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "c-a": self.c - self.a,
            "c-b": self.c - self.b,
            "a-b": self.a - self.b,
        }
        return {k: v.denominator == 1 for k, v in vals.items()}

    @property
    def is_generic(self) -> bool:
        return not any(self.degeneracy_flags().values())


class DiffOp:
    """Linear differential operator sum_i coeffs[i] * d^i with RatFunc coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RatFunc] = ()):
        cs = list(coeffs)
        while cs and cs[-1].is_zero:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    @classmethod
    def identity(cls) -> "DiffOp":
        return cls([RF_ONE])

    @classmethod
    def partial(cls) -> "DiffOp":
        return cls([RF_ZERO, RF_ONE])

    @classmethod
    def theta(cls) -> "DiffOp":
        """The Euler operator x d/dx."""
        return cls([RF_ZERO, RatFunc(X)])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> RatFunc:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else RF_ZERO

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffOp) and self.coeffs == other.coeffs

    def __add__(self, other: "DiffOp") -> "DiffOp":
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp([self.coeff(i) + other.coeff(i) for i in range(n)])

    def __neg__(self) -> "DiffOp":
        return DiffOp([-c for c in self.coeffs])

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def premul(self, f: RatFunc) -> "DiffOp":
        """Left-multiply by a function (no commutation involved)."""
        return DiffOp([f * c for c in self.coeffs])

    def d_compose(self) -> "DiffOp":
        """d/dx composed with this operator: d·(f d^i) = f' d^i + f d^(i+1)."""
        out = [RF_ZERO] * (len(self.coeffs) + 1)
        for i, f in enumerate(self.coeffs):
            out[i] = out[i] + f.derivative()
            out[i + 1] = out[i + 1] + f
        return DiffOp(out)

    def apply(self, f: RatFunc) -> RatFunc:
        """Apply to a function: sum coeffs[i] * f^(i)."""
        out = RF_ZERO
        der = f
        for i, c in enumerate(self.coeffs):
            if i > 0:
                der = der.derivative()
            if not c.is_zero:
                out = out + c * der
        return out

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.order, -1, -1):
            c = self.coeff(i)
            if c.is_zero:
                continue
            dpow = "" if i == 0 else ("d" if i == 1 else f"d^{i}")
            parts.append(f"({c}){dpow}" if dpow else f"({c})")
        return " + ".join(parts)


def compose(outer: DiffOp, inner: DiffOp) -> DiffOp:
    """Operator product outer∘inner with the commutation d·f = f·d + f'."""
    out = DiffOp()
    d_power_of_inner = inner
    for i, f in enumerate(outer.coeffs):
        if i > 0:
            d_power_of_inner = d_power_of_inner.d_compose()
        if not f.is_zero:
            out = out + d_power_of_inner.premul(f)
    return out


def make_L(p: ParamPoint) -> DiffOp:
    """The monic second-order annihilator at the parameter point."""
    lin = Poly.of(p.c, -(p.a + p.b + 1))
    return DiffOp(
        [
            RatFunc(Poly.of(-p.a * p.b), X_1MX),
            RatFunc(lin, X_1MX),
            RF_ONE,
        ]
    )


# Step table: (parameter shifted, delta, action scalar description).
STEP_SHIFTS = {
    "H1": (1, 0, 0),
    "B1": (-1, 0, 0),
    "H2": (0, 1, 0),
    "B2": (0, -1, 0),
    "H3": (0, 0, 1),
    "B3": (0, 0, -1),
}


def step_operator(which: str, p: ParamPoint) -> DiffOp:
    """One of the six first-order contiguity operators at the given point.

    H1 = theta + a                     acts as  a * f(a+1)
    B1 = (-(x)(1-x) d + (bx + a - c)) / ((1-a)(c-a))   acts as  f(a-1)/(a-1)
    H2, B2: the same with a and b exchanged
    H3 = ((1-x) d + (c-a-b)) / ((c-a)(c-b))            acts as  f(c+1)/c
    B3 = theta + c - 1                 acts as  (c-1) * f(c-1)
    """
    a, b, c = p.a, p.b, p.c
    if which == "H1":
        return DiffOp([RatFunc.of(a), RatFunc(X)])
    if which == "H2":
        return DiffOp([RatFunc.of(b), RatFunc(X)])
    if which == "B3":
        return DiffOp([RatFunc.of(c - 1), RatFunc(X)])
    if which == "B1":
        denom = (1 - a) * (c - a)
        if denom == 0:
            raise DegenerateParameter(
                f"B1 at {p}: factor {'1-a' if a == 1 else 'c-a'} vanishes"
            )
        return DiffOp(
            [RatFunc(Poly.of(a - c, b).scale(1 / denom)), RatFunc((-X_1MX).scale(1 / denom))]
        )
    if which == "B2":
        denom = (1 - b) * (c - b)
        if denom == 0:
            raise DegenerateParameter(
                f"B2 at {p}: factor {'1-b' if b == 1 else 'c-b'} vanishes"
            )
        return DiffOp(
            [RatFunc(Poly.of(b - c, a).scale(1 / denom)), RatFunc((-X_1MX).scale(1 / denom))]
        )
    if which == "H3":
        denom = (c - a) * (c - b)
        if denom == 0:
            raise DegenerateParameter(
                f"H3 at {p}: factor {'c-a' if c == a else 'c-b'} vanishes"
            )
        return DiffOp(
            [RatFunc.of(Fraction(c - a - b) / denom), RatFunc(ONE_MINUS_X.scale(1 / denom))]
        )
    raise DegenerateParameter(f"unknown step {which!r}")


def step_action_factor(which: str, p: ParamPoint) -> Fraction:
    """Scalar multiplying the shifted series in the step's action."""
    a, b, c = p.a, p.b, p.c
    table = {
        "H1": lambda: a,
        "B1": lambda: 1 / (a - 1),
        "H2": lambda: b,
        "B2": lambda: 1 / (b - 1),
        "H3": lambda: 1 / c,
        "B3": lambda: c - 1,
    }
    if which not in table:
        raise DegenerateParameter(f"unknown step {which!r}")
    try:
        return Fraction(table[which]())
    except ZeroDivisionError:
        raise DegenerateParameter(f"action factor of {which} undefined at {p}") from None


# ---- Shift classification and predicted q/r structure ----

CASE_IDS = ("i", "ii", "iii", "iv")


def classify(k: int, l: int, m: int) -> str:
    if m >= 1:
        return "i" if m - k - l <= -1 else "ii"
    return "iii" if m - k - l <= -1 else "iv"


def predicted_structure(k: int, l: int, m: int) -> Tuple[Tuple[int, int, int], Tuple[int, int, int]]:
    """((v0, v1, g), (w0, w1, h)) for q = x^v0 (1-x)^v1 q0, r = x^w0 (1-x)^w1 r0.

    A predicted core degree of -1 means the function is identically zero.
    """
    case = classify(k, l, m)
    if case == "i":
        return (1 - m, m + 1 - k - l, l - 1), (1 - m, m + 1 - k - l, l - 2)
    if case == "ii":
        return (1 - m, 1, m - k - 1), (1 - m, 0, m - k - 1)
    if case == "iii":
        return (1, m + 1 - k - l, l - m - 1), (0, m + 1 - k - l, l - m - 1)
    return (1, 1, -k - 1), (0, 0, -k)


@dataclass(frozen=True)
class ShiftTriple:
    """Normalized parameter shift (k, l, m) with k <= l, plus its predictions."""

    k: int
    l: int
    m: int
    case_id: str
    predicted_q: Tuple[int, int, int]
    predicted_r: Tuple[int, int, int]

    @classmethod
    def of(cls, k: int, l: int, m: int) -> "ShiftTriple":
        if k > l:
            raise DegenerateParameter(
                f"ShiftTriple({k}, {l}, {m}): needs k <= l; swap the first two "
                "parameter roles instead (the family is symmetric in a and b)"
            )
        pq, pr = predicted_structure(k, l, m)
        return cls(k=k, l=l, m=m, case_id=classify(k, l, m), predicted_q=pq, predicted_r=pr)


def step_sequence(shift: ShiftTriple) -> List[str]:
    """Canonical composition path: all c-steps, then b-steps, then a-steps."""
    seq: List[str] = []
    seq += ["H3"] * shift.m if shift.m >= 0 else ["B3"] * (-shift.m)
    seq += ["H2"] * shift.l if shift.l >= 0 else ["B2"] * (-shift.l)
    seq += ["H1"] * shift.k if shift.k >= 0 else ["B1"] * (-shift.k)
    return seq


def _alt_step_sequence(shift: ShiftTriple) -> List[str]:
    # Reversed order (a-steps first); used to probe path independence.
    seq: List[str] = []
    seq += ["H1"] * shift.k if shift.k >= 0 else ["B1"] * (-shift.k)
    seq += ["H2"] * shift.l if shift.l >= 0 else ["B2"] * (-shift.l)
    seq += ["H3"] * shift.m if shift.m >= 0 else ["B3"] * (-shift.m)
    return seq


def build_H(shift: ShiftTriple, p: ParamPoint, sequence: Optional[Sequence[str]] = None) -> DiffOp:
    """Compose step operators realizing the shift, tracking the moving point.

    The returned operator satisfies
    H f(a,b;c;x) = (a)_k (b)_l / (c)_m * f(a+k, b+l; c+m; x).
    """
    seq = list(sequence) if sequence is not None else step_sequence(shift)
    op = DiffOp.identity()
    current = p
    for which in seq:
        step = step_operator(which, current)  # raises with the failing step named
        op = compose(step, op)
        current = current.shifted(*STEP_SHIFTS[which])
    return op


def ore_right_divide(P: DiffOp, L: DiffOp) -> Tuple[DiffOp, RatFunc, RatFunc]:
    """Classical right division: P = quotient·L + (q·d + r), remainder order <= 1."""
    if L.order != 2 or L.coeff(2).is_zero:
        raise DegenerateParameter("ore_right_divide: divisor must have exact order 2")
    lead = L.coeff(2)
    quotient = DiffOp()
    rem = P
    while rem.order >= 2:
        d = rem.order
        t = rem.coeff(d) / lead
        mono = DiffOp([RF_ZERO] * (d - 2) + [t])
        quotient = quotient + mono
        rem = rem - compose(mono, L)
        if rem.order >= d:
            raise AssertionError("right division failed to reduce the order")
    return quotient, rem.coeff(1), rem.coeff(0)


def _pochhammer_triple(shift: ShiftTriple, p: ParamPoint) -> Tuple[Fraction, Fraction, Fraction]:
    return (
        pochhammer(p.a, shift.k),
        pochhammer(p.b, shift.l),
        pochhammer(p.c, shift.m),
    )


def _reduced_remainder(
    shift: ShiftTriple, p: ParamPoint, sequence: Optional[Sequence[str]] = None
) -> Tuple[RatFunc, RatFunc]:
    """(q, r) with H = p(d)L + q d + r, reducing after every composition step.

    Reducing incrementally is sound: the left ideal generated by L is closed
    under left multiplication, so composing a step onto a reduced remainder
    and reducing again lands on the same coset as dividing the full product.
    Keeps every intermediate at order <= 2 regardless of the shift size.
    """
    L = make_L(p)
    p1, p0 = L.coeff(1), L.coeff(0)
    u, v = RF_ZERO, RF_ONE  # remainder u·d + v, starting from the identity
    seq = list(sequence) if sequence is not None else step_sequence(shift)
    current = p
    for which in seq:
        step = step_operator(which, current)
        s0, s1 = step.coeff(0), step.coeff(1)
        w2 = s1 * u
        u_next = s1 * (u.derivative() + v) + s0 * u
        v_next = s1 * v.derivative() + s0 * v
        if not w2.is_zero:
            u_next = u_next - w2 * p1
            v_next = v_next - w2 * p0
        u, v = u_next, v_next
        current = current.shifted(*STEP_SHIFTS[which])
    return u, v


def three_term_QR(
    shift: ShiftTriple, p: ParamPoint, sequence: Optional[Sequence[str]] = None
) -> Tuple[RatFunc, RatFunc]:
    """Coefficients of the three-term relation

    f(a+k,b+l;c+m;x) = Q(x) f(a+1,b+1;c+1;x) + R(x) f(a,b;c;x).

    Q = ab (c)_m / (c (a)_k (b)_l) * q and R = (c)_m / ((a)_k (b)_l) * r,
    where q, r is the right-division remainder of the composed operator; the
    scaling uses d f(a,b;c;x) = (ab/c) f(a+1,b+1;c+1;x).
    """
    pk, pl, pm = _pochhammer_triple(shift, p)
    if pk == 0 or pl == 0 or pm == 0 or p.c == 0:
        raise DegenerateParameter(
            f"three_term_QR at {p} with shift ({shift.k},{shift.l},{shift.m}): "
            "a Pochhammer factor or c vanishes"
        )
    q, r = _reduced_remainder(shift, p, sequence)
    qr_scale = pm / (pk * pl)
    Q = q.scale(p.a * p.b / p.c * qr_scale)
    R = r.scale(qr_scale)
    return Q, R


def three_term_for(
    k: int, l: int, m: int, p: ParamPoint, sequence: Optional[Sequence[str]] = None
) -> Tuple[RatFunc, RatFunc]:
    """three_term_QR for arbitrary k, l: a shift with k > l is computed with
    the first two parameter roles exchanged. Sound because every series in
    the relation is symmetric in its two upper parameters."""
    if k > l:
        return three_term_QR(ShiftTriple.of(l, k, m), ParamPoint(p.b, p.a, p.c), sequence)
    return three_term_QR(ShiftTriple.of(k, l, m), p, sequence)


@dataclass(frozen=True)
class StructureReport:
    """Observed vs predicted stripped shapes of the three-term coefficients."""

    shift: ShiftTriple
    point: ParamPoint
    predicted_q: Tuple[int, int, int]
    predicted_r: Tuple[int, int, int]
    observed_q: Optional[Tuple[int, int, int]]
    observed_r: Optional[Tuple[int, int, int]]
    q_core_is_poly: bool
    r_core_is_poly: bool

    @property
    def q_matches(self) -> bool:
        return _shape_matches(self.predicted_q, self.observed_q, self.q_core_is_poly)

    @property
    def r_matches(self) -> bool:
        return _shape_matches(self.predicted_r, self.observed_r, self.r_core_is_poly)

    @property
    def matches(self) -> bool:
        return self.q_matches and self.r_matches


def _shape_matches(predicted, observed, core_is_poly: bool) -> bool:
    if predicted[2] == -1:
        # Predicted identically zero; observed None encodes the zero function.
        return observed is None
    return core_is_poly and observed == predicted


def _observe_shape(f: RatFunc):
    if f.is_zero:
        return None, True
    v0, v1, core = strip_x_and_1mx(f)
    is_poly = core.den == ONE
    return (v0, v1, core.num.degree), is_poly


def structure_check(shift: ShiftTriple, p: ParamPoint) -> StructureReport:
    """Compare the stripped shapes of Q and R against the closed tables.

    Q and R differ from q and r by nonzero constants, which leave valuations
    and degrees untouched. Requires a generic point so the specialization does
    not collapse degrees.
    """
    if not p.is_generic:
        flags = [k for k, v in p.degeneracy_flags().items() if v]
        raise DegenerateParameter(f"structure_check needs a generic point; {flags} integral at {p}")
    Q, R = three_term_QR(shift, p)
    oq, q_poly = _observe_shape(Q)
    orr, r_poly = _observe_shape(R)
    return StructureReport(
        shift=shift,
        point=p,
        predicted_q=shift.predicted_q,
        predicted_r=shift.predicted_r,
        observed_q=oq,
        observed_r=orr,
        q_core_is_poly=q_poly,
        r_core_is_poly=r_poly,
    )


# ---- Case-(i) product formula for the q-core ----


def _require_case_i(shift: ShiftTriple) -> None:
    if shift.case_id != "i":
        raise DegenerateParameter(
            f"product formula applies to case (i) shifts only; "
            f"({shift.k},{shift.l},{shift.m}) is case ({shift.case_id})"
        )


def _q0_prefactors(shift: ShiftTriple, p: ParamPoint) -> Tuple[Fraction, Fraction]:
    a, b, c = p.a, p.b, p.c
    k, l, m = shift.k, shift.l, shift.m
    if c == 1:
        raise DegenerateParameter("product formula: factor 1-c vanishes at c = 1")
    pm = pochhammer(c, m)
    if pm == 0:
        raise DegenerateParameter(f"product formula: ({c})_{m} vanishes")
    neg = pochhammer(2 - c, -m)  # raises DegenerateParameter if undefined
    if neg == 0:
        raise DegenerateParameter(f"product formula: (2-c)_({-m}) vanishes")
    first = -pochhammer(a, k) * pochhammer(b, l) / ((1 - c) * pm)
    second = pochhammer(a + 1 - c, k - m) * pochhammer(b + 1 - c, l - m) / ((1 - c) * neg)
    return first, second


def _factor_params(shift: ShiftTriple, p: ParamPoint):
    a, b, c = p.a, p.b, p.c
    k, l, m = shift.k, shift.l, shift.m
    return (
        (c - a + m - k, c - b + m - l, c + m),
        (a + 1 - c, b + 1 - c, 2 - c),
        (a, b, c),
        (1 - a - k, 1 - b - l, 2 - c - m),
    )


def q0_case_i_formula(shift: ShiftTriple, p: ParamPoint, x0: RationalLike) -> Fraction:
    """Evaluate the case-(i) product expression for the q-core at a point.

    Requires all four Gauss factors to terminate at the chosen specialization
    (an upper parameter a nonpositive integer each) with no degenerate lower
    parameters. The caller compares against the engine's stripped q up to one
    multiplicative constant.
    """
    _require_case_i(shift)
    x0 = as_fraction(x0)
    c1, c2 = _q0_prefactors(shift, p)
    values = []
    for idx, (fa, fb, fc) in enumerate(_factor_params(shift, p), start=1):
        if _nonpositive_int(fa) is None and _nonpositive_int(fb) is None:
            raise NonTerminatingFactor(
                f"product formula factor {idx}: 2F1({fa}, {fb}; {fc}; x) does not terminate"
            )
        try:
            values.append(f21v(fa, fb, fc, x0))
        except DegenerateC as exc:
            raise DegenerateParameter(f"product formula factor {idx}: {exc}") from None
    f1, f2, f3, f4 = values
    return c1 * x0 ** shift.m * f1 * f2 + c2 * f3 * f4


def q0_case_i_series(shift: ShiftTriple, p: ParamPoint, order: int) -> Poly:
    """The same product expression as an exact truncated series in x.

    Works at generic (non-resonant) points where the factors need not
    terminate; the result agrees with the engine's q through the requested
    order, which exceeds the predicted core degree in the intended use.
    """
    _require_case_i(shift)
    c1, c2 = _q0_prefactors(shift, p)
    states = []
    for idx, (fa, fb, fc) in enumerate(_factor_params(shift, p), start=1):
        try:
            states.append(f21_series(fa, fb, fc, order))
        except DegenerateC as exc:
            raise DegenerateParameter(f"product formula factor {idx}: {exc}") from None
    f1, f2, f3, f4 = states
    term1 = (f1 * f2).shift_up(shift.m).scale(c1)
    term2 = (f3 * f4).scale(c2)
    combined = term1 + term2
    return Poly(combined.coeffs[: order + 1])


# ---- Pair reduction at x = -1 ----


@dataclass(frozen=True)
class PairReduction:
    """Three-term data tying ell back to the two base series values at x = -1."""

    pair: PairN
    Qpp: Fraction          # Q(-1)
    Rpp: Fraction          # R(-1)
    Q0pp: int              # -Q(-1) * D / (8 n2^2), D = (-2n2)_{2n1} (2n2+1)_{2n1}
    R0pp: int              # R(-1) * D


def pair_reduction_at_minus1(pair: PairN) -> PairReduction:
    """Specialize the three-term relation to (a,b,c) = (-2n2, -2n2, 1) with
    shift (-2n1, 2n1, 0), evaluate at x = -1, and extract the integer pair.

    Also asserts the reassembly: ell(pair) = Q(-1)*f(-2n2+1,-2n2+1;2;-1)
    + R(-1)*f(-2n2,-2n2;1;-1). A failure of integrality or reassembly is
    escalated, never swallowed.
    """
    n1, n2 = pair.n1, pair.n2
    point = ParamPoint.of(-2 * n2, -2 * n2, 1)
    shift = ShiftTriple.of(-2 * n1, 2 * n1, 0)
    Q, R = three_term_QR(shift, point)
    qpp = Q.eval(-1)
    rpp = R.eval(-1)
    d_norm = pochhammer(-2 * n2, 2 * n1) * pochhammer(2 * n2 + 1, 2 * n1)
    q0 = -qpp * d_norm / (8 * n2 * n2)
    r0 = rpp * d_norm
    if q0.denominator != 1 or r0.denominator != 1:
        raise IntegralityViolation(
            f"pair {pair}: normalized reduction data not integral: {q0}, {r0}"
        )
    ell, _ = ell_and_r(1, pair)
    base_up = f21v(-2 * n2 + 1, -2 * n2 + 1, 2, -1)
    base = f21v(-2 * n2, -2 * n2, 1, -1)
    if qpp * base_up + rpp * base != ell:
        raise IntegralityViolation(
            f"pair {pair}: reduction reassembly mismatch: "
            f"{qpp} * {base_up} + {rpp} * {base} != {ell}"
        )
    return PairReduction(pair=pair, Qpp=qpp, Rpp=rpp, Q0pp=int(q0), R0pp=int(r0))

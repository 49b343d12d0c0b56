"""Exact rational evaluation of terminating Gauss series, the integer pair
(ell, r) attached to each index pair, contiguity-based three-term relations,
and certified searches for the equality questions about them."""

from .errors import (
    CheckpointError,
    DegenerateAlpha,
    DegenerateC,
    DegenerateParameter,
    HyperelError,
    IntegralityViolation,
    NonIntegerResult,
    NonTerminating,
    NonTerminatingFactor,
    OutOfDomain,
    PoleAtPoint,
    TableTooSmall,
    ZeroPolynomial,
)
from .exact_num import (
    CertifiedBound,
    PrimeTable,
    binomial,
    dusart_bound,
    log_enclosure,
    odd_double_factorial,
    pochhammer,
    prime_in_open_interval,
)
from .poly_ratfunc import Poly, RatFunc, poly_gcd, strip_x_and_1mx
from .hyper_core import (
    F21Instance,
    PairN,
    check_flip_identity,
    closed_form_ell1_at_n1_zero,
    closed_form_shifted_lower,
    ell_and_r,
    ell_via,
    f21,
    f21_poly,
    f21v,
    jacobi_P,
    kummer_minus1,
)
from .contiguity import (
    DiffOp,
    ParamPoint,
    ShiftTriple,
    StructureReport,
    build_H,
    compose,
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
from .questions import (
    GapCertificate,
    Q3Report,
    Q4Report,
    SearchRecord,
    SearchSummary,
    answer_q3,
    answer_q4,
    dusart_gap_positive,
    prime_gap_certificate,
    q4_bound_check,
    search,
    sieve_gap_check,
    szego_grid_check,
)
from .reports import Report, RunConfig, build_report, write_report

__version__ = "0.1.0"

"""Equality searches, bound chains, and prime-gap certification.

Two families of questions about the integer pair (ell, r):

* variant 1: for which (n1, n2) does ell equal r?  Exhaustive exact search
  plus, in the region n2 >= 4 n1, a prime-gap criterion: any prime p with
  n1 + n2 < p < 2 n2 - 2 n1 divides ell, and a power of two times a unit is
  never divisible by an odd prime, so a witness rules equality out without
  evaluating anything large.
* variant 3: never.  |ell| <= 2^(4 n2) 3^(-2 n1) < 2^(4 n2 - 1) = |r|, the
  middle inequality being 3^(2 n1) > 2.

Past the reach of sieves the gap is certified with explicit prime-counting
bounds under rigorous rational log enclosures, cross-checked against exact
sieve counts on the shared range.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .errors import IntegralityViolation, OutOfDomain, TableTooSmall
from .exact_num import (
    DUSART_X_MIN,
    PrimeTable,
    RationalLike,
    as_fraction,
    dusart_bound,
    prime_in_open_interval,
)
from .hyper_core import PairN, ell_and_r, jacobi_P

MAG_LESS = "ell_less"
MAG_EQUAL = "equal_abs"
MAG_GREATER = "ell_greater"

# Every equality and magnitude anomaly known for variant 1; anything new is
# an unexpected finding and must be surfaced loudly, never swallowed.
KNOWN_EQUALITY_PAIRS_V1 = ((1, 1), (1, 2), (1, 4), (3, 4))
KNOWN_GREATER_PAIRS_V1 = ((1, 3), (2, 3), (3, 6), (4, 6), (6, 9), (8, 12))
CONJECTURE_N2_MIN = 13  # from here on, |ell| < |r| is conjectured for variant 1

REGION_NOTE = (
    "region n1 <= n2 < 4*n1: undetermined by the prime-gap criterion, "
    "resolved by exact evaluation up to n2_max"
)


@dataclass(frozen=True)
class SearchRecord:
    """One exact (ell, r) comparison."""

    variant: int
    pair: PairN
    ell: int
    r: int
    equal: bool
    magnitude: str

    @classmethod
    def build(cls, variant: int, pair: PairN, ell: int, r: int) -> "SearchRecord":
        if abs(ell) < abs(r):
            mag = MAG_LESS
        elif abs(ell) == abs(r):
            mag = MAG_EQUAL
        else:
            mag = MAG_GREATER
        return cls(variant=variant, pair=pair, ell=ell, r=r, equal=ell == r, magnitude=mag)


@dataclass(frozen=True)
class SearchSummary:
    variant: int
    n2_max: int
    pair_count: int
    equality_pairs: Tuple[Tuple[int, int], ...]
    greater_pairs: Tuple[Tuple[int, int], ...]
    conjecture_violations: Tuple[Tuple[int, int], ...]
    unexpected_findings: Tuple[str, ...]

    @property
    def verdict(self) -> str:
        if not self.unexpected_findings:
            return "expected"
        return "unexpected: " + "; ".join(self.unexpected_findings)


def _search_worker(args: Tuple[int, Tuple[int, ...]]) -> List[Tuple[int, int, int, int]]:
    variant, n2s = args
    rows = []
    for n2 in n2s:
        for n1 in range(1, n2 + 1):
            ell, r = ell_and_r(variant, PairN(n1, n2))
            rows.append((n1, n2, ell, r))
    return rows


def _chunked(values: Sequence[int], size: int) -> List[Tuple[int, ...]]:
    return [tuple(values[i : i + size]) for i in range(0, len(values), size)]


def _map_chunks(worker, args_list, threads: int):
    # Deterministic regardless of pool size: executor.map preserves order.
    if threads <= 1 or len(args_list) <= 1:
        return [worker(a) for a in args_list]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, args_list))


def iter_search_records(
    variant: int,
    n2_max: int,
    threads: int = 1,
    n2_start: int = 1,
    chunk_size: int = 8,
) -> Iterator[Tuple[int, List[SearchRecord]]]:
    """Yield (last_n2_of_chunk, records) in (n2, n1) order, chunked for
    checkpointing. Output is identical for any thread count."""
    n2_values = list(range(n2_start, n2_max + 1))
    for chunk in _chunked(n2_values, chunk_size):
        args = [(variant, (n2,)) for n2 in chunk]
        rows_per_n2 = _map_chunks(_search_worker, args, threads)
        records = [
            SearchRecord.build(variant, PairN(n1, n2), ell, r)
            for rows in rows_per_n2
            for (n1, n2, ell, r) in rows
        ]
        yield chunk[-1], records


def summarize_search(variant: int, n2_max: int, records: Sequence[SearchRecord]) -> SearchSummary:
    equality = tuple((rec.pair.n1, rec.pair.n2) for rec in records if rec.equal)
    greater = tuple(
        (rec.pair.n1, rec.pair.n2) for rec in records if rec.magnitude == MAG_GREATER
    )
    violations = tuple(
        (rec.pair.n1, rec.pair.n2)
        for rec in records
        if rec.pair.n2 >= CONJECTURE_N2_MIN and rec.magnitude != MAG_LESS
    )
    findings: List[str] = []
    if variant == 1:
        for p in equality:
            if p not in KNOWN_EQUALITY_PAIRS_V1:
                findings.append(f"new equality pair {p}")
        for p in greater:
            if p not in KNOWN_GREATER_PAIRS_V1:
                findings.append(f"new |ell| > |r| pair {p}")
    else:
        for p in equality:
            findings.append(f"equality pair {p} for variant 3")
    for p in violations:
        findings.append(f"conjecture violation at {p}: n2 >= {CONJECTURE_N2_MIN} without |ell| < |r|")
    return SearchSummary(
        variant=variant,
        n2_max=n2_max,
        pair_count=len(records),
        equality_pairs=equality,
        greater_pairs=greater,
        conjecture_violations=violations,
        unexpected_findings=tuple(findings),
    )


def search(variant: int, n2_max: int, threads: int = 1) -> Tuple[List[SearchRecord], SearchSummary]:
    """Exact sweep over every pair with n2 <= n2_max."""
    records: List[SearchRecord] = []
    for _, chunk in iter_search_records(variant, n2_max, threads=threads):
        records.extend(chunk)
    return records, summarize_search(variant, n2_max, records)


# ---- Question 4: the bound chain for variant 3 ----


class Q4Bound(NamedTuple):
    abs_ell3: int
    bound: Fraction
    abs_r3: int
    chain_holds: bool


def q4_bound_check(pair: PairN) -> Q4Bound:
    """|ell_3| <= 2^(4 n2) 3^(-2 n1) < 2^(4 n2 - 1) = |r_3|, all exact."""
    ell, r = ell_and_r(3, pair)
    bound = Fraction(1 << (4 * pair.n2), 3 ** (2 * pair.n1))
    holds = abs(ell) <= bound < abs(r)
    return Q4Bound(abs_ell3=abs(ell), bound=bound, abs_r3=abs(r), chain_holds=holds)


def tail_inequality_all_n1() -> bool:
    """Certify 3^(2 n1) > 2 for every n1 >= 1 by integer induction.

    Base: 3^2 = 9 > 2. Step: each n1 increment multiplies by 3^2 >= 1, so
    the power is nondecreasing in n1. Both facts are checked as exact
    integers rather than assumed.
    """
    base = 3 ** 2
    step = 3 ** 2
    return base > 2 and step >= 1


def szego_grid_check(b_exponent: int, degree: int, grid_points: int) -> bool:
    """Weighted-square maximum at the right endpoint, on a rational grid.

    For w(x) = (1+x)^b on [-1, 1] and the degree-n member P of the (0, b)
    orthogonal family, checks w(x) P(x)^2 <= w(1) P(1)^2 at grid_points
    equally spaced rational points. Squares keep everything in exact
    rationals; the inequality is equivalent to the square-root-weighted form.
    """
    if grid_points >= 2:
        step = Fraction(2, grid_points - 1)
        xs = [Fraction(-1) + step * j for j in range(grid_points)]
    else:
        xs = [Fraction(1)]
    rhs = 2 ** b_exponent * jacobi_P(degree, 0, b_exponent, 1) ** 2
    for x in xs:
        value = (1 + x) ** b_exponent * jacobi_P(degree, 0, b_exponent, x) ** 2
        if value > rhs:
            return False
    return True


@dataclass(frozen=True)
class Q4Report:
    n2_max: int
    # Rows: (n1, n2, chain_holds, equal, bits of |ell_3|); the bit length
    # stands in for the magnitude so reports and figures stay small.
    rows: Tuple[Tuple[int, int, bool, bool, int], ...]
    equality_pairs: Tuple[Tuple[int, int], ...]
    all_chains_hold: bool
    tail_certified: bool

    @property
    def verdict(self) -> str:
        if not self.equality_pairs and self.all_chains_hold and self.tail_certified:
            return "no equality pairs"
        return "unexpected: " + ", ".join(
            ([f"equality pairs {list(self.equality_pairs)}"] if self.equality_pairs else [])
            + ([] if self.all_chains_hold else ["bound chain violated"])
            + ([] if self.tail_certified else ["tail inequality not certified"])
        )


def answer_q4(n2_max: int) -> Q4Report:
    """Run the bound chain over every pair with n2 <= n2_max."""
    rows: List[Tuple[int, int, bool, bool, int]] = []
    equality: List[Tuple[int, int]] = []
    all_hold = True
    for n2 in range(1, n2_max + 1):
        for n1 in range(1, n2 + 1):
            pair = PairN(n1, n2)
            ell, r = ell_and_r(3, pair)
            bound = Fraction(1 << (4 * n2), 3 ** (2 * n1))
            holds = abs(ell) <= bound < abs(r)
            eq = ell == r
            rows.append((n1, n2, holds, eq, abs(ell).bit_length()))
            if eq:
                equality.append((n1, n2))
            all_hold = all_hold and holds
    return Q4Report(
        n2_max=n2_max,
        rows=tuple(rows),
        equality_pairs=tuple(equality),
        all_chains_hold=all_hold,
        tail_certified=tail_inequality_all_n1(),
    )


# ---- Question 3: prime-gap certificates and the two-sided certification ----


@dataclass(frozen=True)
class GapCertificate:
    """Witness prime in the open interval (n1+n2, 2 n2 - 2 n1), if any."""

    pair: PairN
    lo: int
    hi: int
    witness_prime: Optional[int]
    divisibility_checked: bool


def gap_interval_dominates(pair: PairN) -> bool:
    """Exact check that 2 n2 - 2 n1 >= (6/5)(n1 + n2), true iff n2 >= 4 n1.

    Rearrangement: 2 n2 - 2 n1 - (6/5)(n1 + n2) = (4 n2 - 16 n1) / 5.
    """
    return 2 * pair.n2 - 2 * pair.n1 >= Fraction(6 * (pair.n1 + pair.n2), 5)


def _certificate(pair: PairN, table: PrimeTable, ell: Optional[int], check_divisibility: bool) -> GapCertificate:
    lo = pair.n1 + pair.n2
    hi = 2 * pair.n2 - 2 * pair.n1
    witness = prime_in_open_interval(lo, hi, table)
    checked = False
    if witness is not None and check_divisibility:
        if ell is None:
            ell, _ = ell_and_r(1, pair)
        if ell % witness != 0:
            raise IntegralityViolation(
                f"witness {witness} for pair ({pair.n1},{pair.n2}) does not divide ell = {ell}"
            )
        checked = True
    return GapCertificate(
        pair=pair, lo=lo, hi=hi, witness_prime=witness, divisibility_checked=checked
    )


def prime_gap_certificate(pair: PairN, table: PrimeTable, check_divisibility: bool) -> GapCertificate:
    """Search the open interval for a prime; optionally verify it divides ell.

    A witness rules out ell = r: r is a signed power of two, and ell gains an
    odd prime factor. Divisibility failure would falsify the criterion, so it
    raises instead of returning quietly.
    """
    return _certificate(pair, table, None, check_divisibility)


def dusart_gap_positive(x: RationalLike) -> bool:
    """Certified positivity of the prime-count gap between x and 6x/5."""
    x = as_fraction(x)
    if x < DUSART_X_MIN:
        raise OutOfDomain(f"dusart_gap_positive needs x >= {DUSART_X_MIN}, got {x}")
    lower = dusart_bound(x * Fraction(6, 5), "lower").value
    upper = dusart_bound(x, "upper").value
    return lower - upper > 0


def sieve_gap_check(table: PrimeTable, x_lo: int, x_hi: int) -> bool:
    """pi(ceil(6x/5) - 1) > pi(x) for every integer x in [x_lo, x_hi].

    The left side counts primes strictly below 6x/5, so this is exactly
    "some prime lies in the open interval (x, 1.2x)".
    """
    hi_needed = -((-6 * x_hi) // 5) - 1
    if hi_needed > table.limit:
        raise TableTooSmall(f"sieve check to {x_hi} needs table limit {hi_needed}, have {table.limit}")
    for x in range(x_lo, x_hi + 1):
        if table.pi(-((-6 * x) // 5) - 1) <= table.pi(x):
            return False
    return True


def floor_to_decimal(v: Fraction, places: int = 9) -> Fraction:
    """Largest multiple of 10^-places that is <= v; a certified lower bound
    stays one after flooring, at a fraction of the digits."""
    scale = 10 ** places
    return Fraction(floor(v * scale), scale)


@dataclass(frozen=True)
class GridMargin:
    """One certified grid point: margin = lower(pi(6x/5)) - upper(pi(x))."""

    x: Fraction
    margin: Fraction
    sieve_agrees: Optional[bool]  # None when x is past the table


def dusart_grid_margins(
    table: PrimeTable,
    x0: RationalLike = DUSART_X_MIN,
    ratio: RationalLike = Fraction(11, 10),
    x_max: RationalLike = 10 ** 8,
) -> List[GridMargin]:
    """Certified margins on the geometric grid x0 * ratio^j up to x_max.

    Where the sieve still reaches, cross-check that the open interval
    (x, 6x/5) really contains a prime.
    """
    x = as_fraction(x0)
    ratio = as_fraction(ratio)
    x_max = as_fraction(x_max)
    out: List[GridMargin] = []
    while x <= x_max:
        lower = dusart_bound(x * Fraction(6, 5), "lower").value
        upper = dusart_bound(x, "upper").value
        hi_idx = ceil(x * Fraction(6, 5)) - 1
        agrees: Optional[bool] = None
        if hi_idx <= table.limit:
            agrees = table.pi(hi_idx) - table.pi(floor(x)) > 0
        out.append(GridMargin(x=x, margin=lower - upper, sieve_agrees=agrees))
        x = x * ratio
    return out


def finite_region_n1_range(n2: int, x_cap: int) -> range:
    """n1 values with 4 n1 <= n2 and n1 + n2 < x_cap."""
    return range(1, min(n2 // 4, x_cap - 1 - n2) + 1)


_WORKER_TABLES: Dict[int, PrimeTable] = {}


def _table_for(limit: int) -> PrimeTable:
    table = _WORKER_TABLES.get(limit)
    if table is None:
        table = PrimeTable.build(limit)
        _WORKER_TABLES[limit] = table
    return table


def _q3_worker(args: Tuple[int, Tuple[int, ...]]) -> List[Tuple[int, int, bool, int, int]]:
    # Row: (n1, n2, equal, witness or 0, divides: 1 yes / 0 not checked).
    x_cap, n2s = args
    table = _table_for(2 * x_cap)
    rows = []
    for n2 in n2s:
        for n1 in finite_region_n1_range(n2, x_cap):
            pair = PairN(n1, n2)
            ell, r = ell_and_r(1, pair)
            cert = _certificate(pair, table, ell, check_divisibility=True)
            rows.append(
                (
                    n1,
                    n2,
                    ell == r,
                    cert.witness_prime or 0,
                    1 if cert.divisibility_checked else 0,
                )
            )
    return rows


class Q3Aggregate:
    """Running totals for the finite-region sweep; checkpoint-serializable."""

    def __init__(self) -> None:
        self.pair_count = 0
        self.witness_count = 0
        self.divisibility_checked_count = 0
        self.evaluation_resolved_count = 0
        self.equality_pairs: List[Tuple[int, int]] = []

    def update(self, rows: Iterable[Tuple[int, int, bool, int, int]]) -> None:
        for n1, n2, equal, witness, divides in rows:
            self.pair_count += 1
            if witness:
                self.witness_count += 1
                self.divisibility_checked_count += divides
            else:
                self.evaluation_resolved_count += 1
            if equal:
                self.equality_pairs.append((n1, n2))

    def state(self) -> dict:
        return {
            "pair_count": self.pair_count,
            "witness_count": self.witness_count,
            "divisibility_checked_count": self.divisibility_checked_count,
            "evaluation_resolved_count": self.evaluation_resolved_count,
            "equality_pairs": [list(p) for p in self.equality_pairs],
        }

    @classmethod
    def from_state(cls, state: dict) -> "Q3Aggregate":
        agg = cls()
        agg.pair_count = int(state["pair_count"])
        agg.witness_count = int(state["witness_count"])
        agg.divisibility_checked_count = int(state["divisibility_checked_count"])
        agg.evaluation_resolved_count = int(state["evaluation_resolved_count"])
        agg.equality_pairs = [tuple(int(v) for v in p) for p in state["equality_pairs"]]
        return agg


def iter_q3_chunks(
    x_cap: int,
    threads: int = 1,
    n2_start: int = 4,
    chunk_size: int = 16,
) -> Iterator[Tuple[int, List[Tuple[int, int, bool, int, int]]]]:
    """Yield (last_n2_of_chunk, rows) over the finite region, in n2 order."""
    n2_values = [n2 for n2 in range(n2_start, x_cap - 1) if finite_region_n1_range(n2, x_cap)]
    for chunk in _chunked(n2_values, chunk_size):
        args = [(x_cap, (n2,)) for n2 in chunk]
        rows = [row for rows in _map_chunks(_q3_worker, args, threads) for row in rows]
        yield chunk[-1], rows


@dataclass(frozen=True)
class Q3Report:
    x_cap: int
    pair_count: int
    equality_pairs: Tuple[Tuple[int, int], ...]
    witness_count: int
    divisibility_checked_count: int
    evaluation_resolved_count: int
    dusart_at_x_min: bool
    grid: Tuple[GridMargin, ...]
    grid_all_positive: bool
    grid_sieve_agreement: bool
    sieve_range: Tuple[int, int]
    sieve_all_positive: bool
    boundary_identity_holds: bool
    region_note: str = REGION_NOTE

    @property
    def verdict(self) -> str:
        problems: List[str] = []
        if set(self.equality_pairs) != {(1, 4)}:
            problems.append(f"equality set {sorted(set(self.equality_pairs))} != [(1, 4)]")
        if self.witness_count != self.divisibility_checked_count:
            problems.append("some witness went unverified")
        if not self.dusart_at_x_min:
            problems.append("certified gap fails at the threshold")
        if not self.grid_all_positive:
            problems.append("certified gap fails on the grid")
        if not self.grid_sieve_agreement:
            problems.append("grid and sieve disagree")
        if not self.sieve_all_positive:
            problems.append("sieve check fails")
        if not self.boundary_identity_holds:
            problems.append("boundary identity fails")
        return "expected" if not problems else "unexpected: " + "; ".join(problems)


def boundary_identity_check(n1_max: int = 200) -> bool:
    """At n2 = 4 n1 the interval length equals (6/5)(n1+n2) exactly."""
    for n1 in range(1, n1_max + 1):
        n2 = 4 * n1
        if Fraction(2 * n2 - 2 * n1) != Fraction(6 * (n1 + n2), 5):
            return False
        if not gap_interval_dominates(PairN(n1, n2)):
            return False
    return True


def answer_q3(
    table: PrimeTable,
    threads: int = 1,
    x_cap: int = DUSART_X_MIN,
    sieve_x_max: int = 10 ** 6,
    grid_x_max: int = 10 ** 8,
    aggregate: Optional[Q3Aggregate] = None,
    n2_start: int = 4,
) -> Q3Report:
    """Full certification: finite-region sweep (A), certified bounds past it
    (B), and the exact sieve cross-check on the shared range (C).

    Pass a pre-loaded aggregate plus n2_start to resume a partial sweep.
    """
    if table.limit < 2 * DUSART_X_MIN:
        raise TableTooSmall(f"answer_q3 needs table limit >= {2 * DUSART_X_MIN}")
    agg = aggregate if aggregate is not None else Q3Aggregate()
    for _, rows in iter_q3_chunks(x_cap, threads=threads, n2_start=n2_start):
        agg.update(rows)
    return finish_q3(
        agg, table, x_cap=x_cap, sieve_x_max=sieve_x_max, grid_x_max=grid_x_max
    )


def finish_q3(
    agg: Q3Aggregate,
    table: PrimeTable,
    x_cap: int,
    sieve_x_max: int,
    grid_x_max: int,
) -> Q3Report:
    """Parts (B) and (C) plus assembly, given a completed finite sweep."""
    grid = dusart_grid_margins(table, x0=DUSART_X_MIN, x_max=grid_x_max)
    sieve_ok = sieve_gap_check(table, DUSART_X_MIN, sieve_x_max)
    return Q3Report(
        x_cap=x_cap,
        pair_count=agg.pair_count,
        equality_pairs=tuple(agg.equality_pairs),
        witness_count=agg.witness_count,
        divisibility_checked_count=agg.divisibility_checked_count,
        evaluation_resolved_count=agg.evaluation_resolved_count,
        dusart_at_x_min=dusart_gap_positive(DUSART_X_MIN),
        grid=tuple(grid),
        grid_all_positive=all(g.margin > 0 for g in grid),
        grid_sieve_agreement=all(g.sieve_agrees for g in grid if g.sieve_agrees is not None),
        sieve_range=(DUSART_X_MIN, sieve_x_max),
        sieve_all_positive=sieve_ok,
        boundary_identity_holds=boundary_identity_check(),
    )

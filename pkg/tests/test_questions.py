"""Search sweeps, magnitude questions, and the prime-gap certification."""

from fractions import Fraction

import pytest

from hyperel import (
    IntegralityViolation,
    OutOfDomain,
    PairN,
    PrimeTable,
    TableTooSmall,
    answer_q3,
    answer_q4,
    dusart_gap_positive,
    prime_gap_certificate,
    q4_bound_check,
    search,
    sieve_gap_check,
    szego_grid_check,
)
from hyperel.questions import (
    CONJECTURE_N2_MIN,
    KNOWN_EQUALITY_PAIRS_V1,
    KNOWN_GREATER_PAIRS_V1,
    Q3Aggregate,
    boundary_identity_check,
    dusart_grid_margins,
    finite_region_n1_range,
    floor_to_decimal,
    gap_interval_dominates,
    iter_q3_chunks,
    iter_search_records,
    summarize_search,
    tail_inequality_all_n1,
)

F = Fraction


# ---- search sweeps ----


def test_search_variant1_known_sets():
    records, summary = search(1, 20)
    assert summary.pair_count == 210
    assert summary.equality_pairs == ((1, 1), (1, 2), (1, 4), (3, 4))
    assert summary.greater_pairs == ((1, 3), (2, 3), (3, 6), (4, 6), (6, 9), (8, 12))
    assert summary.conjecture_violations == ()
    assert summary.verdict == "expected"
    by_pair = {(r.pair.n1, r.pair.n2): r for r in records}
    assert by_pair[(1, 2)].ell == 4 and by_pair[(1, 2)].r == 4
    assert by_pair[(1, 2)].equal and by_pair[(1, 2)].magnitude == "equal_abs"
    assert by_pair[(1, 3)].magnitude == "ell_greater"
    assert by_pair[(2, 2)].magnitude == "ell_less"


def test_search_variant3_no_equalities():
    _, summary = search(3, 20)
    assert summary.equality_pairs == ()
    assert summary.verdict == "expected"


def test_search_orders_records_canonically():
    records, _ = search(1, 6)
    keys = [(r.pair.n2, r.pair.n1) for r in records]
    assert keys == sorted(keys)
    assert len(records) == 21


def test_search_parallel_matches_serial():
    serial, _ = search(1, 16, threads=1)
    parallel, _ = search(1, 16, threads=2)
    assert serial == parallel


def test_search_chunks_resume_midway():
    # records accumulated from a later start match the tail of a full run
    full = []
    for _, chunk in iter_search_records(1, 12, n2_start=1):
        full.extend(chunk)
    tail = []
    for _, chunk in iter_search_records(1, 12, n2_start=7):
        tail.extend(chunk)
    head = [r for r in full if r.pair.n2 < 7]
    assert head + tail == full


def test_summarize_flags_unexpected():
    records = []
    for _, chunk in iter_search_records(1, 14):
        records.extend(chunk)
    summary = summarize_search(1, 14, records)
    assert summary.verdict == "expected"
    assert CONJECTURE_N2_MIN == 13
    assert set(KNOWN_EQUALITY_PAIRS_V1) == {(1, 1), (1, 2), (1, 4), (3, 4)}
    assert len(KNOWN_GREATER_PAIRS_V1) == 6


# ---- bound chain for the second variant ----


def test_q4_bound_chain_samples():
    b = q4_bound_check(PairN(1, 3))
    assert b.abs_ell3 == 127
    assert b.bound == F(4096, 9)
    assert b.abs_r3 == 2048
    assert b.chain_holds
    for n1, n2 in [(1, 1), (2, 5), (7, 9)]:
        assert q4_bound_check(PairN(n1, n2)).chain_holds


def test_q4_tail_certificate():
    assert tail_inequality_all_n1()


def test_answer_q4_report():
    report = answer_q4(25)
    assert report.n2_max == 25
    assert report.verdict == "no equality pairs"
    assert report.tail_certified
    assert len(report.rows) == 25 * 26 // 2
    assert all(row[2] for row in report.rows)  # chain holds everywhere
    assert not any(row[3] for row in report.rows)  # no equalities


def test_szego_grid_check():
    assert szego_grid_check(4, 4, 201)
    assert szego_grid_check(4, 4, 2)  # endpoints only
    assert szego_grid_check(4, 0, 1)  # constant polynomial, single point
    assert szego_grid_check(2, 3, 101)


# ---- prime-gap certification ----


def test_gap_certificates(table_2k):
    c = prime_gap_certificate(PairN(1, 5), table_2k, check_divisibility=True)
    assert (c.lo, c.hi) == (6, 8)
    assert c.witness_prime == 7
    assert c.divisibility_checked
    c2 = prime_gap_certificate(PairN(1, 4), table_2k, check_divisibility=True)
    assert c2.witness_prime is None and not c2.divisibility_checked
    c3 = prime_gap_certificate(PairN(2, 9), table_2k, check_divisibility=False)
    assert c3.witness_prime == 13 and not c3.divisibility_checked


def test_gap_interval_dominates_threshold():
    # interval length beats the Dusart window exactly when n2 >= 4 n1
    assert gap_interval_dominates(PairN(1, 4))
    assert gap_interval_dominates(PairN(1, 5))
    assert gap_interval_dominates(PairN(2, 8))
    assert not gap_interval_dominates(PairN(2, 7))
    assert not gap_interval_dominates(PairN(1, 3))


def test_dusart_gap_positive():
    assert dusart_gap_positive(599)
    assert dusart_gap_positive(F(10**8))
    with pytest.raises(OutOfDomain):
        dusart_gap_positive(598)


def test_sieve_gap_check(table_2k):
    assert sieve_gap_check(table_2k, 599, 1500)
    with pytest.raises(TableTooSmall):
        sieve_gap_check(table_2k, 599, 5000)


def test_boundary_identity():
    # at n2 = 4 n1 the interval upper end meets the Dusart window exactly
    assert boundary_identity_check(200)
    for n1 in (1, 7, 50):
        lo = n1 + 4 * n1
        hi = 2 * (4 * n1) - 2 * n1
        assert F(6, 5) * lo == hi


def test_grid_margins_small_range(table_2k):
    margins = dusart_grid_margins(table_2k, x0=599, x_max=1000)
    xs = [m.x for m in margins]
    assert xs[0] == 599
    assert all(xs[i] < xs[i + 1] for i in range(len(xs) - 1))
    assert all(xs[i + 1] == xs[i] * F(11, 10) for i in range(len(xs) - 1))
    assert all(m.margin > 0 for m in margins)
    assert all(m.sieve_agrees for m in margins)  # all below the table limit


def test_floor_to_decimal():
    assert floor_to_decimal(F(1, 3)) == F(333333333, 10**9)
    assert floor_to_decimal(F(-1, 3)) == F(-333333334, 10**9)
    assert floor_to_decimal(F(5)) == 5
    assert floor_to_decimal(F(1, 3), places=2) == F(33, 100)
    v = F(12345, 7)
    assert floor_to_decimal(v) <= v < floor_to_decimal(v) + F(1, 10**9)


# ---- the finite-region sweep ----


def test_finite_region_bounds():
    assert list(finite_region_n1_range(4, 599)) == [1]
    assert list(finite_region_n1_range(8, 599)) == [1, 2]
    assert list(finite_region_n1_range(3, 599)) == []
    # the cap n1 + n2 < x_cap bites for large n2
    assert list(finite_region_n1_range(596, 599)) == [1, 2]
    assert list(finite_region_n1_range(598, 599)) == []
    total = sum(len(finite_region_n1_range(n2, 599)) for n2 in range(4, 599))
    assert total == 35581


def test_q3_aggregate_state_roundtrip():
    agg = Q3Aggregate()
    rows = [(1, 4, True, 0, 0), (1, 5, False, 7, 1), (1, 6, False, 0, 0)]
    agg.update(rows)
    restored = Q3Aggregate.from_state(agg.state())
    assert restored.state() == agg.state()
    assert restored.pair_count == 3
    assert restored.witness_count == 1
    assert restored.divisibility_checked_count == 1
    assert restored.equality_pairs == [(1, 4)]
    # (1,4) and (1,6) carry no witness, so both fall to direct evaluation
    assert restored.evaluation_resolved_count == 2


def test_q3_chunks_partition():
    whole = Q3Aggregate()
    for _, rows in iter_q3_chunks(120, n2_start=4):
        whole.update(rows)
    expected = sum(len(finite_region_n1_range(n2, 120)) for n2 in range(4, 120))
    assert whole.pair_count == expected
    assert whole.equality_pairs == [(1, 4)]


def test_answer_q3_reduced_scale():
    table = PrimeTable.build(40000)
    report = answer_q3(table, x_cap=120, sieve_x_max=5000, grid_x_max=20000)
    assert report.equality_pairs == ((1, 4),)
    assert report.pair_count == sum(
        len(finite_region_n1_range(n2, 120)) for n2 in range(4, 120)
    )
    # every pair either carries a witness or fell to direct evaluation
    assert report.witness_count + report.evaluation_resolved_count == report.pair_count
    assert report.witness_count == report.divisibility_checked_count
    assert report.dusart_at_x_min
    assert report.grid_all_positive and report.grid_sieve_agreement
    assert report.sieve_all_positive
    assert report.sieve_range == (599, 5000)
    assert report.boundary_identity_holds
    assert all(m.margin > 0 for m in report.grid)
    assert report.verdict == "expected"


def test_answer_q3_table_guard():
    with pytest.raises(TableTooSmall):
        answer_q3(PrimeTable.build(1000), x_cap=599)

"""Tests for the factorization identities and the witness builders."""

import pytest

from autoplex.core.errors import ConstructionError, DomainError
from autoplex.models.automata import is_deterministic_partial, is_unique_witness, sequence_from_labels
from autoplex.models.words import Word, fibonacci_word, tribonacci_word
from autoplex.services.constructions import (
    JAPAN_SEQUENCE,
    Cycle,
    FibContext,
    LoopSchedule,
    Path,
    TribContext,
    build_from_schedule,
    fib_length_decomposition,
    fib_number,
    fibonacci_japan_schedule,
    fibonacci_japan_witness,
    fibonacci_witness,
    prefix_theorem_onset,
    smallest_passing,
    trib_critical_exponent_closed_form,
    tribonacci_bound,
    tribonacci_schedule,
    tribonacci_witness,
    unique_sol_fib,
    unique_sol_trib,
    upper_rate,
    verify_also_prove,
    verify_circ_identity,
    verify_conclusion_decomposition,
    verify_length_identity,
    verify_prefix_theorem,
    verify_tail,
)


# ==================== Contexts ====================


@pytest.mark.unit
def test_trib_context_shift():
    ctx = TribContext(6)
    assert ctx.c(0) == tribonacci_word(9)
    assert ctx.d(0) == 44
    assert ctx.d(2) == 13
    assert ctx.prefix_top == 7
    assert ctx.prefix_sum() == 2
    with pytest.raises(DomainError):
        ctx.c(10)


@pytest.mark.unit
def test_trib_context_limiting_recurrence():
    for n in range(4, 14):
        ctx = TribContext(n)
        assert ctx.c(n - 2) == ctx.product([n - 1, n, n + 1])


@pytest.mark.unit
def test_fib_context():
    ctx = FibContext(8)
    assert ctx.c(0) == fibonacci_word(8)
    assert ctx.product([1, 2]) == ctx.c(0)
    assert fib_number(10) == 55


# ==================== Tribonacci identities ====================


@pytest.mark.unit
def test_prefix_theorem():
    assert verify_prefix_theorem(15)


@pytest.mark.slow
def test_prefix_theorem_large():
    assert verify_prefix_theorem(24)


@pytest.mark.unit
def test_prefix_theorem_onset_is_reported():
    report, onset = prefix_theorem_onset(2, 15)
    assert set(report) == set(range(2, 16))
    assert onset is not None and onset <= 15
    assert all(report[n] for n in range(onset, 16))


@pytest.mark.unit
def test_smallest_passing():
    report, onset = smallest_passing(lambda n: n % 4 != 1, 1, 12)
    assert onset == 10
    assert report[9] is False
    _, none = smallest_passing(lambda n: n < 5, 1, 8)
    assert none is None


@pytest.mark.unit
def test_circ_identity():
    assert verify_circ_identity(15, 4)
    assert verify_circ_identity(18, 5)
    with pytest.raises(DomainError):
        verify_circ_identity(15, 5)
    with pytest.raises(DomainError):
        verify_circ_identity(20, 3)


@pytest.mark.unit
@pytest.mark.parametrize("m", [4, 5, 6])
def test_also_prove(m):
    assert verify_also_prove(20, m)


@pytest.mark.unit
def test_tail_and_length_identities():
    assert verify_tail(12)
    assert all(verify_tail(n) for n in range(5, 15))
    assert all(verify_length_identity(n) for n in range(8, 31))
    with pytest.raises(DomainError):
        verify_tail(4)


@pytest.mark.unit
def test_unique_sol_fib():
    assert not unique_sol_fib(5)
    assert all(unique_sol_fib(n) for n in range(6, 31))
    with pytest.raises(DomainError):
        unique_sol_fib(2)


@pytest.mark.unit
def test_unique_sol_trib():
    assert unique_sol_trib(9)
    assert all(unique_sol_trib(n) for n in range(8, 31))
    with pytest.raises(DomainError):
        unique_sol_trib(2)


# ==================== Fibonacci identities ====================


@pytest.mark.unit
@pytest.mark.parametrize("n", [12, 14, 16])
def test_conclusion_decomposition(n):
    assert verify_conclusion_decomposition(n)


@pytest.mark.unit
def test_conclusion_decomposition_needs_room():
    with pytest.raises(DomainError):
        verify_conclusion_decomposition(7)


@pytest.mark.unit
def test_fib_length_decomposition():
    assert all(fib_length_decomposition(n) for n in range(6, 41))
    with pytest.raises(DomainError):
        fib_length_decomposition(5)


# ==================== Loop schedules ====================


@pytest.mark.unit
def test_schedule_self_loop():
    a, seq = build_from_schedule(LoopSchedule((Cycle(1, 3),), Word.from_string("000")))
    assert seq.states == (0, 0, 0, 0)
    assert a.q == 1
    assert a.edges == {(0, 0, 0)}


@pytest.mark.unit
def test_schedule_two_state_cycle():
    w = Word.from_string("01010")
    a, seq = build_from_schedule(LoopSchedule((Cycle(2, 5),), w))
    assert seq.states == (0, 1, 0, 1, 0, 1)
    assert a.accept == {1}
    assert is_unique_witness(a, w)


@pytest.mark.unit
def test_schedule_entered_cycle():
    w = Word.from_string("0111", 2)
    _, seq = build_from_schedule(LoopSchedule((Path(1), Cycle(2, 3, entered=True)), w))
    assert seq.states == (0, 1, 2, 3, 2)


@pytest.mark.unit
def test_schedule_label_conflict():
    with pytest.raises(ConstructionError):
        build_from_schedule(LoopSchedule((Cycle(2, 5),), Word.from_string("01020")))


@pytest.mark.unit
def test_schedule_length_mismatch():
    with pytest.raises(ConstructionError):
        build_from_schedule(LoopSchedule((Cycle(1, 2),), Word.from_string("000")))


@pytest.mark.unit
def test_segment_validation():
    with pytest.raises(DomainError):
        Cycle(2, 1)
    with pytest.raises(DomainError):
        Cycle(0, 3)
    with pytest.raises(DomainError):
        Path(-1)


# ==================== Witness builders ====================


@pytest.mark.unit
@pytest.mark.parametrize("n", range(9, 17))
def test_fibonacci_witness(n):
    built = fibonacci_witness(n)
    assert built.record.value == 2 * fib_number(n - 3)
    assert built.record.upper == built.record.value
    assert built.record.measure == "AN"
    assert built.record.method == "construction:fib-interm"
    assert is_unique_witness(built.automaton, fibonacci_word(n))


@pytest.mark.unit
def test_fibonacci_witness_fails_below_onset():
    with pytest.raises(ConstructionError):
        fibonacci_witness(8)
    with pytest.raises(DomainError):
        fibonacci_witness(5)


@pytest.mark.unit
def test_fibonacci_japan_witness():
    built = fibonacci_japan_witness(10)
    assert built.automaton.q == 22
    assert built.record.method == "published-sequence:fib-japan"
    assert built.record.value / built.record.length == 0.4
    assert 0.4 <= upper_rate("fib_japan")
    assert built.dot.startswith("digraph {")


@pytest.mark.unit
def test_bridged_schedule_reproduces_published_sequence():
    w = fibonacci_word(10)
    _, seq = build_from_schedule(fibonacci_japan_schedule(10))
    assert seq == sequence_from_labels(JAPAN_SEQUENCE, w)


@pytest.mark.unit
def test_tribonacci_witness():
    six = tribonacci_witness(6)
    assert six.automaton.q == 22
    assert six.record.length == 44
    assert six.record.measure == "AMINUS"
    assert is_deterministic_partial(six.automaton)
    assert is_unique_witness(six.automaton, tribonacci_word(9))
    assert tribonacci_witness(7).automaton.q == 41


@pytest.mark.unit
@pytest.mark.parametrize("n", range(6, 11))
def test_tribonacci_witness_matches_bound(n):
    assert tribonacci_witness(n).automaton.q == tribonacci_bound(n)


@pytest.mark.unit
@pytest.mark.parametrize(
    "n, first, middle, second",
    [
        # the d2-cycle would run one step past the d2-periodic prefix at n = 6 and n = 9
        (6, 27, 3, 14),
        (7, 51, 6, 24),
        (8, 94, 11, 44),
        (9, 176, 16, 82),
        (10, 325, 30, 149),
    ],
)
def test_tribonacci_schedule_per_context(n, first, middle, second):
    ctx = TribContext(n)
    schedule = tribonacci_schedule(n)
    assert schedule.segments == (
        Cycle(ctx.d(2), first),
        Path(middle),
        Cycle(ctx.d(4) + ctx.d(5), second, entered=True),
    )
    assert schedule.steps == ctx.d(0)
    assert ctx.d(2) + middle + ctx.d(4) + ctx.d(5) == tribonacci_bound(n)


# ==================== Rates ====================


@pytest.mark.unit
def test_upper_rates():
    assert upper_rate("fib_interm") == pytest.approx(0.472135955, abs=1e-9)
    assert upper_rate("fib_japan") == pytest.approx(0.41640786499, abs=1e-10)
    assert upper_rate("trib_aminus") == pytest.approx(0.4870856, abs=1e-7)
    with pytest.raises(DomainError):
        upper_rate("unknown")


@pytest.mark.unit
def test_critical_exponent_closed_form():
    assert trib_critical_exponent_closed_form() == pytest.approx(3.19148788, abs=1e-8)

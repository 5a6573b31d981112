import pytest
from hypothesis import given, settings, strategies as st

from covsys import (
    Ecs,
    MergeCandidate,
    ReductionTrace,
    ResidueClass,
    SplitStep,
    check_corollary2,
    generate_natural,
    is_irreducible,
    is_natural,
    is_prime_split,
    merge,
    merge_candidates,
    reduce_step,
    reduce_to_trivial,
    split,
    verify_crt,
    verify_scan,
)
from covsys.arith import omega
from covsys.errors import (
    AlreadyTrivial,
    CosetNotPresent,
    NoEligibleMaximalModulus,
    NotExact,
    TargetNotPresent,
    WrongPrimeSupport,
)

TRIVIAL = Ecs([(0, 1)])
HALVES = Ecs([(0, 2), (1, 2)])
QUARTER = Ecs([(0, 2), (1, 4), (3, 4)])
THIRDS = Ecs([(0, 3), (1, 3), (2, 3)])


def test_split_examples():
    assert split(TRIVIAL, (0, 1), 3) == THIRDS
    assert split(HALVES, (1, 2), 2) == QUARTER
    with pytest.raises(TargetNotPresent):
        split(TRIVIAL, (0, 2), 2)


def test_split_composite_arity():
    assert split(TRIVIAL, (0, 1), 6) == Ecs.basic(6)


def test_split_consumes_one_occurrence():
    A = Ecs([(0, 2), (0, 2), (1, 2)])
    assert split(A, (0, 2), 2) == Ecs([(0, 2), (0, 4), (2, 4), (1, 2)])


def test_merge_examples():
    assert merge(QUARTER, MergeCandidate(4, 2, 1)) == HALVES
    assert merge(THIRDS, MergeCandidate(3, 3, 0)) == TRIVIAL
    with pytest.raises(CosetNotPresent):
        merge(HALVES, MergeCandidate(4, 2, 1))


def test_merge_candidates_examples(example13):
    assert merge_candidates(QUARTER) == [MergeCandidate(4, 2, 1)]
    assert merge_candidates(example13) == []
    assert merge_candidates(THIRDS) == [MergeCandidate(3, 3, 0)]


def test_merge_candidates_exhaustive_oracle():
    A = Ecs.basic(12)
    expected = sorted(
        MergeCandidate(12, p, d) for p in (2, 3) for d in range(12 // p)
    )
    assert merge_candidates(A) == expected


def test_is_prime_split_examples():
    assert is_prime_split(HALVES, TRIVIAL)
    assert is_prime_split(QUARTER, HALVES)
    assert not is_prime_split(TRIVIAL, TRIVIAL)
    assert not is_prime_split(QUARTER, TRIVIAL)
    # composite split is not a prime split
    assert not is_prime_split(Ecs.basic(4), TRIVIAL)


def test_is_irreducible_examples(example13):
    assert is_irreducible(example13)
    assert not is_irreducible(HALVES)
    assert not is_irreducible(TRIVIAL)
    with pytest.raises(NotExact):
        is_irreducible(Ecs([(0, 2), (1, 4)]))


def test_reduce_step_examples(example13):
    B, step = reduce_step(QUARTER)
    assert B == HALVES and step == SplitStep(ResidueClass(1, 2), 2)
    B, step = reduce_step(THIRDS)
    assert B == TRIVIAL and step == SplitStep(ResidueClass(0, 1), 3)
    with pytest.raises(NoEligibleMaximalModulus):
        reduce_step(example13)
    with pytest.raises(AlreadyTrivial):
        reduce_step(TRIVIAL)
    with pytest.raises(NotExact):
        reduce_step(Ecs([(0, 2), (1, 4)]))


def test_reduce_step_prefers_smallest_maximal_modulus():
    # maximal moduli 4 and 6; 4 is chosen
    A = Ecs([(0, 4), (2, 4), (1, 6), (3, 6), (5, 6)])
    assert verify_crt(A)
    B, step = reduce_step(A)
    assert step == SplitStep(ResidueClass(0, 2), 2)
    assert B == Ecs([(0, 2), (1, 6), (3, 6), (5, 6)])


def test_reduce_to_trivial_basic6():
    A = Ecs.basic(6)
    trace = reduce_to_trivial(A)
    assert sum(s.prime - 1 for s in trace) == 5
    assert trace.replay() == A


def test_reduce_to_trivial_small():
    assert len(reduce_to_trivial(TRIVIAL)) == 0
    trace = reduce_to_trivial(QUARTER)
    assert len(trace) == 2
    assert trace.steps == (SplitStep(ResidueClass(0, 1), 2), SplitStep(ResidueClass(1, 2), 2))


def test_trace_prefixes_are_exact():
    A, _ = generate_natural(11, 8, (2, 3))
    trace = reduce_to_trivial(A)
    sizes = [len(B) for B in trace.prefixes()]
    assert all(verify_crt(B) for B in trace.prefixes())
    assert sizes[-1] == len(A) == trace.class_count


def test_is_natural_examples(example13):
    assert is_natural(TRIVIAL) == (True, ReductionTrace(()))
    assert is_natural(example13) == (False, None)
    ok, trace = is_natural(QUARTER)
    assert ok and len(trace) == 2 and trace.replay() == QUARTER


def test_is_natural_three_prime_system_uses_search():
    # split 0(1) by 2, 0(2) by 3, 0(6) by 5: moduli 2, 6, 30
    A = split(split(split(TRIVIAL, (0, 1), 2), (0, 2), 3), (0, 6), 5)
    assert max(omega(n) for n in A.moduli) == 3
    ok, trace = is_natural(A)
    assert ok and trace.replay() == A


def test_refining_irreducible_example_can_make_it_natural(example13):
    # 0(15) -> 0(30), 15(30) completes the coset {0, 6, 12, 18, 24} mod 30
    A = split(example13, (0, 15), 2)
    assert MergeCandidate(30, 5, 0) in merge_candidates(A)
    ok, trace = is_natural(A)
    assert ok and trace.replay() == A


def test_example_embedded_in_odd_integers_is_not_natural():
    # a(n) -> 2a+1 (2n) maps the example onto 1(2); no coset is mergeable
    A = Ecs([(0, 2)] + [(2 * a + 1, 2 * n) for a, n in
            [(2, 6), (4, 6), (1, 10), (3, 10), (7, 10), (9, 10), (0, 15),
             (5, 30), (6, 30), (12, 30), (18, 30), (24, 30), (25, 30)]])
    assert verify_crt(A)
    assert merge_candidates(A) == []
    ok, trace = is_natural(A)
    assert not ok and trace is None


def test_is_natural_backtracking_explores_several_merges(example13):
    # two independent refinements; only one merge order path needs to succeed
    A = split(split(example13, (0, 15), 2), (2, 6), 2)
    ok, trace = is_natural(A)
    assert ok and trace.replay() == A


def test_check_corollary2_example(example13):
    r = check_corollary2(example13, (2, 3, 5))
    assert r.hypothesis and r.conclusion and r.holds
    assert set(r.witness) <= {6, 10, 15, 30}
    assert r.divisible_modulus == 30


def test_check_corollary2_finds_paper_triple(example13):
    from covsys.reduction import six_conditions
    assert six_conditions(6, 10, 15, 2, 3, 5)


def test_check_corollary2_errors():
    with pytest.raises(WrongPrimeSupport):
        check_corollary2(HALVES, (2, 3, 5))
    with pytest.raises(ValueError):
        check_corollary2(HALVES, (2, 2, 5))


def test_generate_natural_examples():
    A, trace = generate_natural(123, 0, (2,))
    assert A == TRIVIAL and len(trace) == 0
    A, trace = generate_natural(7, 5, (2, 3))
    assert len(A) >= 6
    assert all(set(f.primes) <= {2, 3} for f in map(__import__("covsys").factorize, A.moduli))
    assert verify_scan(A).is_exact
    assert reduce_to_trivial(A).replay() == A
    assert is_natural(A)[0]
    assert generate_natural(7, 5, (2, 3)) == (A, trace)


def test_generate_natural_frozen_output():
    # pins the documented PRNG contract (random.Random, randrange draws)
    A, _ = generate_natural(3, 5, (2, 3))
    assert A == Ecs([(0, 4), (2, 4), (1, 6), (5, 6), (9, 18), (15, 18), (3, 36), (21, 36)])


def test_generate_natural_respects_caps():
    for seed in range(50):
        A, trace = generate_natural(seed, 8, (2, 3, 5, 7), max_lcm=100, max_prime_factors=2)
        assert A.lcm <= 100
        assert all(omega(n) <= 2 for n in A.moduli)
        assert trace.replay() == A


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 8))
def test_merge_split_round_trip(seed, steps):
    A, _ = generate_natural(seed, steps, (2, 3, 5), max_lcm=5000)
    for c in merge_candidates(A):
        B = merge(A, c)
        assert split(B, c.merged, c.prime) == A
        assert is_prime_split(A, B)
        assert verify_crt(B)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 6), st.sampled_from([2, 3, 5]))
def test_every_split_is_found_as_candidate(seed, steps, p):
    A, _ = generate_natural(seed, steps, (2, 3), max_lcm=5000)
    target = A.classes[seed % len(A)]
    B = split(A, target, p)
    stride = target.modulus
    cand = MergeCandidate(target.modulus * p, p, target.residue)
    assert cand.merged == target and cand.members[1].residue == target.residue + stride
    assert cand in merge_candidates(B)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 8))
def test_reduce_step_soundness(seed, steps):
    A, _ = generate_natural(seed, steps, (2, 3, 5, 7), max_lcm=10000, max_prime_factors=2)
    if A.is_trivial():
        return
    B, step = reduce_step(A)
    assert verify_crt(B)
    assert is_prime_split(A, B)
    assert len(A) - len(B) == step.prime - 1
    trace = reduce_to_trivial(A)
    assert trace.replay() == A
    assert sum(s.prime - 1 for s in trace) == len(A) - 1

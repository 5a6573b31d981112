import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from covsys import (
    Ecs,
    ResidueClass,
    generate_natural,
    normalize,
    stats,
    verify_crt,
    verify_genfun,
    verify_scan,
)
from covsys.errors import EmptySystem, InvalidModulus, ScanLimitExceeded


@pytest.mark.parametrize("raw, expected", [((7, 4), (3, 4)), ((0, 1), (0, 1)), ((-1, 5), (4, 5))])
def test_normalize(raw, expected):
    assert normalize(raw) == ResidueClass(*expected)


@pytest.mark.parametrize("n", [0, -3])
def test_normalize_rejects_bad_modulus(n):
    with pytest.raises(InvalidModulus):
        normalize((1, n))


def test_residue_class_requires_reduced_form():
    with pytest.raises(ValueError):
        ResidueClass(5, 4)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**4))
def test_normalize_idempotent(a, n):
    c = normalize((a, n))
    assert normalize(c) == c
    assert normalize((c.residue, c.modulus)) == c
    assert a in c


def test_empty_system_rejected():
    with pytest.raises(EmptySystem):
        Ecs([])


@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(1, 12)), min_size=1, max_size=8), st.randoms())
def test_equality_ignores_order(pairs, rnd):
    shuffled = list(pairs)
    rnd.shuffle(shuffled)
    assert Ecs(pairs) == Ecs(shuffled)
    assert hash(Ecs(pairs)) == hash(Ecs(shuffled))


def test_multiset_semantics():
    assert len(Ecs([(0, 2), (0, 2)])) == 2
    assert Ecs([(0, 2), (0, 2)]) != Ecs([(0, 2)])


def test_scan_trivial():
    r = verify_scan(Ecs([(0, 1)]))
    assert r.is_exact and r.density == 1 and r.lcm == 1


def test_scan_example(example13):
    r = verify_scan(example13)
    assert r.is_exact
    assert r.density == 1
    assert r.lcm == 30
    assert r.greatest_modulus_count == 6
    assert r.uncovered == () and r.multiply_covered == ()


def test_scan_missing_residue():
    r = verify_scan(Ecs([(0, 2), (1, 4)]))
    assert not r.is_exact
    assert 3 in r.uncovered
    assert r.multiply_covered == ()


def test_scan_limit():
    A = Ecs([(0, 2), (1, 2)])
    with pytest.raises(ScanLimitExceeded):
        verify_scan(Ecs([(0, 1009), (0, 1013)]), scan_limit=10**6)
    assert verify_scan(A, scan_limit=2).is_exact


@pytest.mark.parametrize("pairs, exact", [
    ([(0, 2), (0, 3)], False),
    ([(0, 2), (1, 4), (3, 4)], True),
    ([(0, 2), (1, 2), (1, 2)], False),
])
def test_crt(pairs, exact):
    assert verify_crt(Ecs(pairs)) is exact


@pytest.mark.parametrize("pairs, exact", [
    ([(0, 2), (1, 2)], True),
    ([(0, 2), (1, 4)], False),
])
def test_genfun(pairs, exact):
    assert verify_genfun(Ecs(pairs)) is exact


def test_genfun_example(example13):
    assert verify_genfun(example13)


def test_density_one_does_not_imply_exact():
    A = Ecs([(0, 2), (0, 2)])
    assert A.density == 1
    assert not verify_scan(A).is_exact
    assert not verify_crt(A)
    assert not verify_genfun(A)


def test_stats_example(example13):
    r = stats(example13)
    assert r.is_exact is None
    assert r.maximal_moduli == {30}
    assert r.greatest_modulus_count == 6
    assert r.density == Fraction(2, 6) + Fraction(4, 10) + Fraction(1, 15) + Fraction(6, 30) == 1


def test_stats_small():
    r = stats(Ecs([(0, 2), (1, 4), (3, 4)]))
    assert r.maximal_moduli == {4}
    assert r.density == 1


def test_maximal_moduli_division_order():
    # 4 and 6 are both maximal; 8 would beat 4 but is absent
    r = stats(Ecs([(0, 2), (1, 4), (3, 4)] + [(0, 6)]))
    assert r.maximal_moduli == {4, 6}


def _perturb(A, rng):
    cs = list(A.classes)
    i = rng.randrange(len(cs))
    a, n = cs[i].residue, cs[i].modulus
    cs[i] = ResidueClass((a + rng.randrange(1, n)) % n, n) if n > 1 else ResidueClass(0, 2)
    return Ecs(cs)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 8), st.sampled_from([(2,), (2, 3), (2, 3, 5), (3, 5, 7)]))
def test_verifiers_agree(seed, steps, primes):
    A, _ = generate_natural(seed, steps, primes, max_lcm=20000)
    B = _perturb(A, random.Random(seed))
    for X, expected in ((A, True), (B, None)):
        got = {verify_scan(X).is_exact, verify_crt(X), verify_genfun(X)}
        assert len(got) == 1
        if expected is not None:
            assert got == {expected}


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 8))
def test_no_coprime_moduli_in_exact_systems(seed, steps):
    A, _ = generate_natural(seed, steps, (2, 3, 5, 7), max_lcm=20000)
    ms = sorted(set(A.moduli))
    from math import gcd
    assert not any(gcd(a, b) == 1 and a > 1 and b > 1 for a in ms for b in ms if a != b)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 8))
def test_greatest_modulus_repeats(seed, steps):
    A, _ = generate_natural(seed, steps, (2, 3, 5, 7), max_lcm=20000)
    assert stats(A).greatest_modulus_count >= 2

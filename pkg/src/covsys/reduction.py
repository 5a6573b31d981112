"""Splitting, merging and the prime-split reduction of exact covering systems."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional

from .arith import is_prime, omega, prime_divisors
from .cyclotomic import find_coset, from_exponents
from .ecs import Ecs, ResidueClass, is_exact, maximal_moduli, normalize
from .errors import (
    AlreadyTrivial,
    CosetNotPresent,
    NoEligibleMaximalModulus,
    NotExact,
    TargetNotPresent,
    WrongPrimeSupport,
)

TRIVIAL = Ecs.trivial()


@dataclass(frozen=True)
class SplitStep:
    """Split ``parent_class`` into ``prime`` classes."""

    parent_class: ResidueClass
    prime: int

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError(f"split arity {self.prime} is not prime")

    def children(self) -> list[ResidueClass]:
        a, t = self.parent_class.residue, self.parent_class.modulus
        return [ResidueClass(a + i * t, t * self.prime) for i in range(self.prime)]


@dataclass(frozen=True)
class ReductionTrace:
    """Prime splits in coarse-to-fine order; replaying from {0(1)} rebuilds the system."""

    steps: tuple = ()

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    @property
    def class_count(self) -> int:
        return 1 + sum(s.prime - 1 for s in self.steps)

    def replay(self, start: Ecs = TRIVIAL) -> Ecs:
        A = start
        for step in self.steps:
            A = split(A, step.parent_class, step.prime)
        return A

    def prefixes(self, start: Ecs = TRIVIAL):
        """Yield the system after each prefix of the trace, starting with ``start``."""
        A = start
        yield A
        for step in self.steps:
            A = split(A, step.parent_class, step.prime)
            yield A


@dataclass(frozen=True, order=True)
class MergeCandidate:
    """The p classes {shift + j*(modulus/prime) (modulus)} that merge into shift(modulus/prime)."""

    modulus: int
    prime: int
    shift: int

    def __post_init__(self):
        if not is_prime(self.prime) or self.modulus % self.prime:
            raise ValueError(f"{self.prime} is not a prime divisor of {self.modulus}")
        if not 0 <= self.shift < self.modulus // self.prime:
            raise ValueError(f"shift {self.shift} outside [0, {self.modulus // self.prime})")

    @property
    def members(self) -> list[ResidueClass]:
        stride = self.modulus // self.prime
        return [ResidueClass(self.shift + j * stride, self.modulus) for j in range(self.prime)]

    @property
    def merged(self) -> ResidueClass:
        return ResidueClass(self.shift, self.modulus // self.prime)


def _replace(A: Ecs, remove: list, add: list) -> Ecs:
    counts = Counter(A.classes)
    counts.subtract(remove)
    kept = [c for c, k in counts.items() for _ in range(k)]
    return Ecs(kept + add)


def split(A: Ecs, target, n: int) -> Ecs:
    """Replace one occurrence of ``target = a(t)`` by the n classes a + i*t (t*n)."""
    target = normalize(target)
    if n < 2:
        raise ValueError(f"split arity must be at least 2, got {n}")
    if target not in A.counter:
        raise TargetNotPresent(f"{target} is not a class of {A}")
    a, t = target.residue, target.modulus
    return _replace(A, [target], [ResidueClass(a + i * t, t * n) for i in range(n)])


def merge(A: Ecs, c: MergeCandidate) -> Ecs:
    members = c.members
    have = A.counter
    if any(have[m] < 1 for m in members):
        raise CosetNotPresent(f"coset {[str(m) for m in members]} not all in {A}")
    return _replace(A, members, [c.merged])


def merge_candidates(A: Ecs) -> list[MergeCandidate]:
    out = []
    for n in sorted(set(A.moduli)):
        present = set(A.residues_at(n))
        for p in prime_divisors(n):
            stride = n // p
            for d in range(stride):
                if all(d + j * stride in present for j in range(p)):
                    out.append(MergeCandidate(n, p, d))
    return out


def is_prime_split(A: Ecs, B: Ecs) -> bool:
    """A |= B: A arises from B by splitting one class into a prime number of classes."""
    diff = len(A) - len(B)
    for c in merge_candidates(A):
        if c.prime - 1 == diff and merge(A, c) == B:
            return True
    return False


def _require_exact(A: Ecs) -> None:
    if not is_exact(A):
        raise NotExact(f"{A} is not an exact covering system")


def is_irreducible(A: Ecs) -> bool:
    """Non-trivial and no prime-order coset of classes can be merged."""
    _require_exact(A)
    return not A.is_trivial() and not merge_candidates(A)


def eligible_modulus(A: Ecs) -> Optional[int]:
    """Numerically smallest division-maximal modulus with at most two prime factors."""
    for n in sorted(maximal_moduli(A.moduli)):
        if omega(n) <= 2:
            return n
    return None


def _reduce_step(A: Ecs) -> tuple[Ecs, SplitStep]:
    if A.is_trivial():
        raise AlreadyTrivial("the trivial ECS has no coarser system")
    n_r = eligible_modulus(A)
    if n_r is None:
        raise NoEligibleMaximalModulus(
            f"every maximal modulus of {A} has three or more distinct prime factors: "
            f"{sorted(maximal_moduli(A.moduli))}"
        )
    coset = find_coset(from_exponents(n_r, A.residues_at(n_r)))
    cand = MergeCandidate(n_r, coset.prime, coset.shift)
    return merge(A, cand), SplitStep(cand.merged, coset.prime)


def reduce_step(A: Ecs) -> tuple[Ecs, SplitStep]:
    """Undo one prime split of an exact system.

    Takes the residues sitting at the smallest eligible maximal modulus n_r,
    finds a full prime-order coset among them, and consolidates it into one
    class mod n_r/p. Returns the coarser system and the split that undoes it.
    """
    _require_exact(A)
    return _reduce_step(A)


def reduce_to_trivial(A: Ecs) -> ReductionTrace:
    _require_exact(A)
    fine_to_coarse = []
    while not A.is_trivial():
        A, step = _reduce_step(A)
        fine_to_coarse.append(step)
    return ReductionTrace(tuple(reversed(fine_to_coarse)))


def is_natural(A: Ecs) -> tuple[bool, Optional[ReductionTrace]]:
    """Decide whether A can be built from {0(1)} by iterated splitting.

    Systems whose moduli all have at most two prime factors always reduce
    greedily. Otherwise a backtracking search over all merges runs, skipping
    systems already known to be dead ends.
    """
    _require_exact(A)
    if all(omega(n) <= 2 for n in set(A.moduli)):
        return True, reduce_to_trivial(A)
    dead: set = set()
    path: list = []

    def search(B: Ecs) -> bool:
        if B.is_trivial():
            return True
        if B in dead:
            return False
        for c in merge_candidates(B):
            path.append(SplitStep(c.merged, c.prime))
            if search(merge(B, c)):
                return True
            path.pop()
        dead.add(B)
        return False

    if search(A):
        return True, ReductionTrace(tuple(reversed(path)))
    return False, None


@dataclass(frozen=True)
class Corollary2Report:
    primes: tuple
    witness: Optional[tuple]  # (n1, n2, n3) realizing the six conditions
    divisible_modulus: Optional[int]  # some modulus divisible by p1*p2*p3

    @property
    def hypothesis(self) -> bool:
        return self.witness is not None

    @property
    def conclusion(self) -> bool:
        return self.divisible_modulus is not None

    @property
    def holds(self) -> bool:
        return not self.hypothesis or self.conclusion


def six_conditions(n1: int, n2: int, n3: int, p1: int, p2: int, p3: int) -> bool:
    return (
        (n1 * n2) % p1 == 0 and (n1 * n3) % p2 == 0 and (n2 * n3) % p3 == 0
        and n3 % p1 != 0 and n2 % p2 != 0 and n1 % p3 != 0
    )


@lru_cache(maxsize=4096)
def _corollary2_witness(moduli: tuple, primes: tuple) -> Optional[tuple]:
    for triple in product(moduli, repeat=3):
        if six_conditions(*triple, *primes):
            return triple
    return None


def check_corollary2(A: Ecs, primes) -> Corollary2Report:
    """Search all triples of moduli for the six divisibility conditions.

    The corollary asserts that whenever such a triple exists (and N(A) has
    exactly the prime support {p1, p2, p3}) some modulus is divisible by
    p1*p2*p3.
    """
    primes = tuple(int(p) for p in primes)
    if len(primes) != 3 or len(set(primes)) != 3 or not all(map(is_prime, primes)):
        raise ValueError(f"need three distinct primes, got {primes}")
    _require_exact(A)
    support = set(prime_divisors(A.lcm))
    if support != set(primes):
        raise WrongPrimeSupport(
            f"N(A) = {A.lcm} has prime support {sorted(support)}, expected {sorted(primes)}"
        )
    moduli = tuple(sorted(set(A.moduli)))
    witness = _corollary2_witness(moduli, primes)
    P = primes[0] * primes[1] * primes[2]
    divisible = next((n for n in moduli if n % P == 0), None)
    return Corollary2Report(primes, witness, divisible)

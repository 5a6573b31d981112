"""Residue classes, exact covering systems and the three exactness verifiers."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .errors import EmptySystem, InvalidModulus, ScanLimitExceeded

DEFAULT_SCAN_LIMIT = 10**6


@dataclass(frozen=True)
class ResidueClass:
    """The progression ``residue + modulus*Z`` with ``0 <= residue < modulus``."""

    residue: int
    modulus: int

    def __post_init__(self):
        if not isinstance(self.modulus, int) or self.modulus < 1:
            raise InvalidModulus(f"modulus must be a positive integer, got {self.modulus!r}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(
                f"residue {self.residue} not reduced mod {self.modulus}; use normalize()"
            )

    @property
    def key(self) -> tuple[int, int]:
        return (self.modulus, self.residue)

    def __contains__(self, x: int) -> bool:
        return (x - self.residue) % self.modulus == 0

    def intersects(self, other: "ResidueClass") -> bool:
        return (self.residue - other.residue) % gcd(self.modulus, other.modulus) == 0

    def __str__(self):
        return f"{self.residue}({self.modulus})"


def normalize(cls, modulus: Optional[int] = None) -> ResidueClass:
    """Reduce a raw ``(residue, modulus)`` pair to a :class:`ResidueClass`.

    Accepts either a pair, an existing ResidueClass, or two integers. Any
    integer residue is allowed; it is reduced mod ``modulus``.
    """
    if modulus is None:
        if isinstance(cls, ResidueClass):
            return cls
        a, n = cls
    else:
        a, n = cls, modulus
    a, n = int(a), int(n)
    if n < 1:
        raise InvalidModulus(f"modulus must be positive, got {n}")
    return ResidueClass(a % n, n)


class Ecs:
    """A finite multiset of residue classes, kept in canonical (modulus, residue) order.

    Construction does not check exactness; use :func:`verify_scan`,
    :func:`verify_crt` or :func:`verify_genfun` for that.
    """

    def __init__(self, classes: Iterable):
        cs = tuple(sorted((normalize(c) for c in classes), key=lambda c: c.key))
        if not cs:
            raise EmptySystem("an ECS needs at least one class")
        self.classes = cs

    @classmethod
    def _canonical(cls, classes: tuple) -> "Ecs":
        # trusted constructor: classes already normalized and sorted
        obj = cls.__new__(cls)
        obj.classes = classes
        return obj

    @classmethod
    def trivial(cls) -> "Ecs":
        return cls._canonical((ResidueClass(0, 1),))

    @classmethod
    def basic(cls, n: int) -> "Ecs":
        return cls._canonical(tuple(ResidueClass(i, n) for i in range(n)))

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __eq__(self, other):
        if not isinstance(other, Ecs):
            return NotImplemented
        return self.classes == other.classes

    def __hash__(self):
        return hash(self.classes)

    def __repr__(self):
        return f"Ecs([{', '.join(f'({c.residue}, {c.modulus})' for c in self.classes)}])"

    def __str__(self):
        return "{" + ", ".join(map(str, self.classes)) + "}"

    @property
    def key(self) -> tuple:
        return tuple(c.key for c in self.classes)

    @cached_property
    def counter(self) -> Counter:
        return Counter(self.classes)

    @property
    def moduli(self) -> list[int]:
        return [c.modulus for c in self.classes]

    @cached_property
    def lcm(self) -> int:
        """N(A), the least common multiple of all moduli."""
        return lcm(*self.moduli)

    @cached_property
    def density(self) -> Fraction:
        return sum((Fraction(1, c.modulus) for c in self.classes), Fraction(0))

    def is_trivial(self) -> bool:
        return self.classes == (ResidueClass(0, 1),)

    def residues_at(self, modulus: int) -> list[int]:
        return [c.residue for c in self.classes if c.modulus == modulus]

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        res = np.fromiter((c.residue for c in self.classes), dtype=np.int64, count=len(self))
        mod = np.fromiter((c.modulus for c in self.classes), dtype=np.int64, count=len(self))
        return res, mod


@dataclass(frozen=True)
class CoverReport:
    """Summary of an ECS. ``is_exact`` and the residue lists are None when no scan ran."""

    lcm: int
    density: Fraction
    greatest_modulus_count: int
    maximal_moduli: frozenset
    is_exact: Optional[bool] = None
    uncovered: Optional[tuple] = None
    multiply_covered: Optional[tuple] = None

    def summary(self) -> str:
        head = {True: "exact", False: "not exact", None: "unverified"}[self.is_exact]
        return f"{head}, N={self.lcm}, density={self.density}"


def maximal_moduli(moduli: Iterable[int]) -> frozenset:
    """Moduli that divide no other (distinct) modulus of the collection."""
    ms = set(moduli)
    return frozenset(n for n in ms if not any(m != n and m % n == 0 for m in ms))


def stats(A: Ecs) -> CoverReport:
    top = max(A.moduli)
    return CoverReport(
        lcm=A.lcm,
        density=A.density,
        greatest_modulus_count=A.moduli.count(top),
        maximal_moduli=maximal_moduli(A.moduli),
    )


def verify_scan(A: Ecs, scan_limit: int = DEFAULT_SCAN_LIMIT) -> CoverReport:
    """Count, for every residue mod N(A), how many classes contain it."""
    N = A.lcm
    if N > scan_limit:
        raise ScanLimitExceeded(f"N(A) = {N} exceeds scan limit {scan_limit}; use verify_crt")
    res, mod = A.as_arrays()
    counts = kernels.coverage_counts(res, mod, N)
    uncovered = tuple(np.flatnonzero(counts == 0).tolist())
    multiple = tuple(np.flatnonzero(counts >= 2).tolist())
    base = stats(A)
    return CoverReport(
        lcm=N,
        density=base.density,
        greatest_modulus_count=base.greatest_modulus_count,
        maximal_moduli=base.maximal_moduli,
        is_exact=not uncovered and not multiple,
        uncovered=uncovered,
        multiply_covered=multiple,
    )


def verify_crt(A: Ecs) -> bool:
    """Pairwise disjointness (a_i = a_j mod gcd(n_i, n_j) iff they meet) plus density 1."""
    if A.density != 1:
        return False
    cs = A.classes
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            if cs[i].intersects(cs[j]):
                return False
    return True


def is_exact(A: Ecs, scan_limit: int = DEFAULT_SCAN_LIMIT) -> bool:
    """Exactness by coverage scan when N(A) is small enough, else by CRT."""
    if A.lcm <= scan_limit:
        res, mod = A.as_arrays()
        return bool(np.all(kernels.coverage_counts(res, mod, A.lcm) == 1))
    return verify_crt(A)


def verify_genfun(A: Ecs) -> bool:
    """Check sum_s z^a_s (1 - z^N)/(1 - z^n_s) == (1 - z^N)/(1 - z) over Z[z].

    Classes are grouped by modulus n; each group contributes
    ``R_n(z) * (1 + z^n + ... + z^(N-n))`` with ``R_n`` the residue polynomial
    of degree < n. Multiplying by that sparse geometric sum is a tiling of the
    coefficient vector, so the product is formed without a dense convolution.
    """
    N = A.lcm
    lhs = np.zeros(N, dtype=np.int64)
    for n in sorted(set(A.moduli)):
        residue_poly = np.zeros(n, dtype=np.int64)
        for a in A.residues_at(n):
            residue_poly[a] += 1
        lhs += np.tile(residue_poly, N // n)
    # (1 - z^N)/(1 - z) = 1 + z + ... + z^(N-1)
    return bool(np.all(lhs == 1))

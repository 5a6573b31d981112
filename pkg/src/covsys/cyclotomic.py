"""Exact arithmetic in Z[C_m] and its image at a primitive m-th root of unity.

Vectors are coefficient tuples over Z/m. "Vanishes" always means exact
divisibility of the representing polynomial by the cyclotomic polynomial
Phi_m; nothing here evaluates roots of unity numerically.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .arith import divisors, is_prime, omega, prime_divisors
from .errors import (
    InvalidCoset,
    NegativeCoefficient,
    NotADivisor,
    NotVanishing,
    TooManyPrimeFactors,
    ZeroVector,
)

Poly = tuple  # integer coefficients, constant term first


def _trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a: Poly, b: Poly) -> Poly:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(_trim(out))


def poly_divmod(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Long division by a monic integer polynomial; both results are integral."""
    den = _trim(list(den))
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(num)
    dd = len(den) - 1
    if len(rem) - 1 < dd:
        return (0,), tuple(_trim(rem or [0]))
    quot = [0] * (len(rem) - dd)
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i]
        if c:
            quot[i - dd] = c
            for j in range(dd + 1):
                rem[i - dd + j] -= c * den[j]
    return tuple(_trim(quot)), tuple(_trim(rem[:dd] or [0]))


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> Poly:
    """Integer coefficients of Phi_m, from (x^m - 1) / prod_{d | m, d < m} Phi_d."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    poly = (-1,) + (0,) * (m - 1) + (1,)
    for d in divisors(m)[:-1]:
        poly, rem = poly_divmod(poly, cyclotomic_polynomial(d))
        assert rem == (0,), f"inexact division by Phi_{d}"
    return poly


@dataclass(frozen=True)
class CycVector:
    """Element of Z[C_m]: ``coeffs[i]`` is the coefficient of the i-th group element."""

    modulus: int
    coeffs: tuple

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if len(self.coeffs) != self.modulus:
            raise ValueError(f"need {self.modulus} coefficients, got {len(self.coeffs)}")

    @classmethod
    def zero(cls, m: int) -> "CycVector":
        return cls(m, (0,) * m)

    def __add__(self, other: "CycVector") -> "CycVector":
        self._check_same(other)
        return CycVector(self.modulus, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CycVector") -> "CycVector":
        self._check_same(other)
        return CycVector(self.modulus, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def _check_same(self, other):
        if other.modulus != self.modulus:
            raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")

    def rotate(self, shift: int) -> "CycVector":
        """Multiply by the group element of index ``shift``."""
        m = self.modulus
        s = shift % m
        return CycVector(m, self.coeffs[m - s:] + self.coeffs[:m - s])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def dominates(self, other: "CycVector") -> bool:
        return all(a >= b for a, b in zip(self.coeffs, other.coeffs))

    @property
    def mass(self) -> int:
        return sum(self.coeffs)

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]


def from_exponents(m: int, exponents: Iterable[int]) -> CycVector:
    """Image of ``sum z**e`` in Z[C_m]: exponents are reduced mod m."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    coeffs = [0] * m
    for e in exponents:
        coeffs[e % m] += 1
    return CycVector(m, tuple(coeffs))


def reduce_mod_cyclotomic(v: CycVector) -> Poly:
    """Remainder of v's polynomial modulo Phi_m (degree < phi(m))."""
    return poly_divmod(v.coeffs, cyclotomic_polynomial(v.modulus))[1]


def vanishes(v: CycVector) -> bool:
    return reduce_mod_cyclotomic(v) == (0,)


def remainder_table(m: int) -> np.ndarray:
    """Row i holds x**i mod Phi_m, padded to width deg(Phi_m)."""
    phi = cyclotomic_polynomial(m)
    width = len(phi) - 1
    table = np.zeros((m, max(width, 1)), dtype=np.int64)
    for i in range(m):
        unit = [0] * m
        unit[i] = 1
        rem = poly_divmod(tuple(unit), phi)[1]
        table[i, :len(rem)] = rem
    return table


def lemma1_quotient(N: int, t: int, n_r: int) -> int:
    """Image of (1 - z^N)/(1 - z^t) at a primitive n_r-th root of unity.

    The quotient is the polynomial 1 + z^t + ... + z^(N - t); its image is
    computed exactly as a remainder mod Phi_{n_r}. The result is N/t when
    n_r divides t and 0 otherwise.
    """
    if N < 1 or t < 1 or N % t:
        raise NotADivisor(f"{t} does not divide {N}")
    if n_r < 1 or N % n_r:
        raise NotADivisor(f"{n_r} does not divide {N}")
    v = from_exponents(n_r, range(0, N, t))
    rem = reduce_mod_cyclotomic(v)
    if len(rem) != 1:
        raise ArithmeticError(f"image of the quotient is not rational: remainder {rem}")
    return rem[0]


@dataclass(frozen=True)
class CosetTerm:
    """The translate z^shift * sigma(P) of the order-``prime`` subgroup of C_modulus."""

    modulus: int
    prime: int
    shift: int

    def __post_init__(self):
        if not is_prime(self.prime) or self.modulus % self.prime:
            raise InvalidCoset(f"{self.prime} is not a prime divisor of {self.modulus}")
        if not 0 <= self.shift < self.modulus // self.prime:
            raise InvalidCoset(
                f"shift {self.shift} outside [0, {self.modulus // self.prime})"
            )

    @property
    def stride(self) -> int:
        return self.modulus // self.prime

    def positions(self) -> list[int]:
        return [self.shift + j * self.stride for j in range(self.prime)]


def coset_vector(c: CosetTerm) -> CycVector:
    coeffs = [0] * c.modulus
    for i in c.positions():
        coeffs[i] = 1
    return CycVector(c.modulus, tuple(coeffs))


def contained_cosets(v: CycVector) -> list[CosetTerm]:
    """Every prime-order coset whose indices all carry positive coefficients.

    Ordered by (prime, shift). Works for any modulus; no vanishing assumed.
    """
    m = v.modulus
    found = []
    for p in prime_divisors(m):
        stride = m // p
        for d in range(stride):
            if all(v.coeffs[d + j * stride] > 0 for j in range(p)):
                found.append(CosetTerm(m, p, d))
    return found


def _check_decomposable(v: CycVector) -> None:
    if not v.is_nonnegative():
        raise NegativeCoefficient("coefficients must be non-negative")
    if omega(v.modulus) > 2:
        raise TooManyPrimeFactors(
            f"{v.modulus} has more than two distinct prime factors"
        )
    if not vanishes(v):
        raise NotVanishing(f"{v.support()} does not vanish mod Phi_{v.modulus}")


def find_coset(v: CycVector) -> CosetTerm:
    """Smallest (prime, shift) coset contained in a non-negative vanishing vector.

    Existence for moduli with at most two distinct prime factors is the
    Lam-Leung theorem; the tie-break makes the choice deterministic.
    """
    if v.is_zero():
        raise ZeroVector("zero vector has no coset")
    _check_decomposable(v)
    m = v.modulus
    for p in prime_divisors(m):
        stride = m // p
        for d in range(stride):
            if all(v.coeffs[d + j * stride] > 0 for j in range(p)):
                return CosetTerm(m, p, d)
    raise ArithmeticError(f"vanishing vector {v.coeffs} contains no prime-order coset")


def decompose(v: CycVector) -> list[CosetTerm]:
    """Write v as a sum of coset vectors by repeatedly peeling off ``find_coset``."""
    if v.is_zero():
        return []
    _check_decomposable(v)
    terms = []
    rest = v
    while not rest.is_zero():
        c = find_coset(rest)
        terms.append(c)
        rest = rest - coset_vector(c)
    return terms


def parse_exponents(text: str) -> list[int]:
    """Comma-separated integers, e.g. ``"5,6,12"``."""
    parts = [p.strip() for p in text.split(",")]
    try:
        return [int(p) for p in parts if p]
    except ValueError as exc:
        raise ValueError(f"bad exponent list {text!r}: {exc}") from None

"""Random natural systems, exhaustive enumeration, and kernel-backed property sweeps."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from functools import lru_cache
from math import lcm
from typing import Optional

import numpy as np

from . import kernels
from .arith import divisors, is_prime, omega, prime_divisors
from .ecs import Ecs, ResidueClass
from .errors import EnumerationLimitExceeded
from .reduction import ReductionTrace, SplitStep, split

DEFAULT_ENUMERATION_LIMIT = 60
_CHUNK = 1 << 15


def generate_natural(
    seed: int,
    steps: int,
    primes=(2, 3),
    max_lcm: Optional[int] = None,
    max_prime_factors: Optional[int] = None,
) -> tuple[Ecs, ReductionTrace]:
    """Build a natural ECS by ``steps`` random prime splits of {0(1)}.

    Randomness comes only from ``random.Random(seed)`` (Mersenne Twister,
    stable across CPython versions for integer seeds and ``randrange``). At
    each step a class is drawn uniformly from the canonically ordered system
    and then a prime uniformly from ``primes``. With ``max_lcm`` or
    ``max_prime_factors`` set, the draw is restricted to splits that keep
    N(A) <= max_lcm and every modulus within the prime-factor bound; the class
    is drawn among classes having at least one admissible prime. When no
    admissible split remains, generation stops early.
    """
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    pool = sorted(set(int(p) for p in primes))
    if not pool or not all(map(is_prime, pool)):
        raise ValueError(f"prime pool must be non-empty and prime, got {primes}")
    rng = random.Random(seed)
    A = Ecs.trivial()
    trace = []
    for _ in range(steps):
        N = A.lcm
        options = []
        for c in A.classes:
            ok = []
            for p in pool:
                n = c.modulus * p
                if max_lcm is not None and lcm(N, n) > max_lcm:
                    continue
                if max_prime_factors is not None and omega(n) > max_prime_factors:
                    continue
                ok.append(p)
            if ok:
                options.append((c, ok))
        if not options:
            break
        c, ok = options[rng.randrange(len(options))]
        p = ok[rng.randrange(len(ok))]
        A = split(A, c, p)
        trace.append(SplitStep(c, p))
    return A, ReductionTrace(tuple(trace))


@dataclass(frozen=True)
class PeriodTables:
    """Divisor lattice of N laid out for the kernels."""

    N: int
    D: np.ndarray
    divmat: np.ndarray
    nprimes: np.ndarray
    primes: np.ndarray
    idx_of: np.ndarray


@lru_cache(maxsize=64)
def period_tables(N: int) -> PeriodTables:
    D = np.array(divisors(N), dtype=np.int64)
    nd = len(D)
    divmat = np.array([[int(D[j]) % int(D[i]) == 0 for j in range(nd)] for i in range(nd)])
    width = max(1, omega(N))
    primes = np.zeros((nd, width), dtype=np.int64)
    nprimes = np.zeros(nd, dtype=np.int64)
    for i, d in enumerate(D.tolist()):
        ps = prime_divisors(d)
        nprimes[i] = len(ps)
        primes[i, :len(ps)] = ps
    idx_of = np.full(N + 1, -1, dtype=np.int64)
    idx_of[D] = np.arange(nd)
    return PeriodTables(N, D, divmat, nprimes, primes, idx_of)


def _run(tables: PeriodTables, mode: int, arrays: dict, budget: int) -> int:
    t = tables
    return kernels.cover_sweep(t.N, t.D, t.divmat, t.nprimes, t.primes, t.idx_of, mode, budget, arrays)


def enumerate_ecs(N: int, limit: int = DEFAULT_ENUMERATION_LIMIT) -> list[Ecs]:
    """All exact covering systems whose moduli divide N, in canonical sorted order.

    Each system is a partition of Z/N into progressions; every class is
    written with the smallest modulus that describes it. Counts grow very
    quickly (206 systems for N = 12, 276734 for N = 30, 8804349 for N = 36).
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if N > limit:
        raise EnumerationLimitExceeded(f"N = {N} exceeds enumeration limit {limit}")
    tables = period_tables(N)
    arrays = kernels.new_sweep_arrays(N, _CHUNK)
    intern: dict = {}
    systems = []
    while not arrays["state"][2]:
        _run(tables, kernels.MODE_COLLECT, arrays, _CHUNK)
        count = int(arrays["state"][3])
        off = arrays["out_off"][:count + 1].tolist()
        res = arrays["out_res"][:off[-1]].tolist()
        mod = arrays["out_mod"][:off[-1]].tolist()
        for j in range(count):
            cs = []
            for s in range(off[j], off[j + 1]):
                key = (mod[s], res[s])
                rc = intern.get(key)
                if rc is None:
                    rc = intern[key] = ResidueClass(res[s], mod[s])
                cs.append(rc)
            cs.sort(key=lambda c: c.key)
            systems.append(Ecs._canonical(tuple(cs)))
    systems.sort(key=lambda e: e.key)
    return systems


@dataclass(frozen=True)
class SweepResult:
    """Outcome of streaming every exact cover of Z/N through a kernel check."""

    N: int
    mode: str
    complete: bool
    systems: int
    trivial: int
    checked: int
    failures: int
    ineligible: int
    skipped: int
    reduction_steps: int
    elapsed: float
    first_failure: Optional[Ecs] = None
    failure_code: int = 0

    @property
    def ok(self) -> bool:
        return self.complete and self.failures == 0 and self.ineligible == 0


_MODES = {
    "count": kernels.MODE_COUNT,
    "theorem_a": kernels.MODE_THEOREM_A,
    "corollary1": kernels.MODE_COROLLARY1,
    "structure": kernels.MODE_STRUCTURE,
}


def sweep(N: int, mode: str, time_budget: Optional[float] = None, chunk: int = 1 << 16) -> SweepResult:
    """Visit every exact cover of Z/N (moduli dividing N) and check each one.

    Modes: ``count`` (visit only); ``theorem_a`` (one reduction step succeeds,
    output exact, class count drops by p - 1); ``corollary1`` (full reduction
    to {0(1)}, trace replays to the input, sum of (p - 1) equals k - 1;
    systems with a three-prime modulus are skipped); ``structure`` (greatest
    modulus repeats, no two coprime moduli above 1). With ``time_budget``
    (seconds) the sweep stops early and reports ``complete=False``.
    """
    code = _MODES[mode]
    tables = period_tables(N)
    arrays = kernels.new_sweep_arrays(N)
    t0 = time.perf_counter()
    while not arrays["state"][2]:
        _run(tables, code, arrays, chunk)
        if time_budget is not None and time.perf_counter() - t0 > time_budget:
            break
    elapsed = time.perf_counter() - t0
    st = arrays["stats"].tolist()
    first = None
    if st[kernels.S_FAIL]:
        k = int(arrays["fail_info"][1])
        D = tables.D
        first = Ecs(zip(arrays["fail_res"][:k].tolist(), D[arrays["fail_dix"][:k]].tolist()))
    return SweepResult(
        N=N,
        mode=mode,
        complete=bool(arrays["state"][2]),
        systems=st[kernels.S_LEAVES],
        trivial=st[kernels.S_TRIVIAL],
        checked=st[kernels.S_CHECKED],
        failures=st[kernels.S_FAIL],
        ineligible=st[kernels.S_INELIGIBLE],
        skipped=st[kernels.S_SKIPPED],
        reduction_steps=st[kernels.S_STEPS],
        elapsed=elapsed,
        first_failure=first,
        failure_code=int(arrays["fail_info"][0]),
    )


def count_ecs(N: int, time_budget: Optional[float] = None) -> int:
    """Number of exact covering systems with all moduli dividing N."""
    result = sweep(N, "count", time_budget=time_budget)
    if not result.complete:
        raise TimeoutError(f"count for N = {N} incomplete after {result.elapsed:.1f}s")
    return result.systems

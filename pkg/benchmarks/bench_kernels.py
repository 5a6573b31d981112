"""Compare the numba kernels with the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat 3]

The numba side is skipped when numba is not importable or COVSYS_NUMBA=0.
The exact-cover sweep has no vectorized form, so its numpy path is the
same loop run by the interpreter; it is timed on a small period only.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from covsys import kernels
from covsys.cyclotomic import CycVector, contained_cosets, remainder_table
from covsys.search import generate_natural

SWEEP_SNIPPET = (
    "import time; from covsys.search import sweep; sweep(6, 'theorem_a'); "
    "t = time.perf_counter(); r = sweep({N}, 'theorem_a'); "
    "print(time.perf_counter() - t, r.systems)"
)


def _coset_masks(m):
    masks = []
    full = CycVector(m, (1,) * m)
    for c in contained_cosets(full):
        masks.append(sum(1 << i for i in c.positions()))
    return np.array(masks, dtype=np.uint64)


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_coverage(repeat):
    A, _ = generate_natural(7, 40, primes=(2, 3, 5, 7))
    res, mod = A.as_arrays()
    rows = []
    for backend in ("numba", "numpy"):
        if backend == "numba" and not kernels.USE_NUMBA:
            continue
        kernels.coverage_counts(res, mod, A.lcm, backend=backend)
        rows.append((f"coverage_counts N={A.lcm} k={len(A)}", backend,
                     best(lambda: kernels.coverage_counts(res, mod, A.lcm, backend=backend), repeat)))
    return rows


def bench_vanishing(repeat, m=18):
    table, masks = remainder_table(m), _coset_masks(m)
    rows = []
    for backend in ("numba", "numpy"):
        if backend == "numba" and not kernels.USE_NUMBA:
            continue
        kernels.vanishing_subsets(4, remainder_table(4), _coset_masks(4), backend=backend)
        rows.append((f"vanishing_subsets m={m}", backend,
                     best(lambda: kernels.vanishing_subsets(m, table, masks, backend=backend), repeat)))
    return rows


def bench_sweep(N=24):
    rows = []
    for flag, backend in (("1", "numba"), ("0", "numpy")):
        if backend == "numba" and not kernels.USE_NUMBA:
            continue
        env = dict(os.environ, COVSYS_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", SWEEP_SNIPPET.format(N=N)], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        rows.append((f"sweep theorem_a N={N} ({out[1]} systems)", backend, float(out[0])))
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sweep-n", type=int, default=24)
    args = ap.parse_args(argv)
    rows = bench_coverage(args.repeat) + bench_vanishing(args.repeat) + bench_sweep(args.sweep_n)
    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'backend':<7}  seconds")
    for name, backend, t in rows:
        print(f"{name:<{width}}  {backend:<7}  {t:.4f}")


if __name__ == "__main__":
    main()

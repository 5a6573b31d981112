"""Hot inner loops: coverage scans, subset vanishing scans, cover enumeration.

Every kernel here is plain index-loop Python over numpy arrays. When numba is
importable and ``COVSYS_NUMBA`` is not ``0`` the loops are compiled with
``numba.njit``; otherwise they run as-is, and the two kernels with a natural
vectorized form (``coverage_counts``, ``vanishing_subsets``) switch to numpy
implementations instead.

The enumeration kernel is resumable: its whole DFS state lives in arrays owned
by the caller, so a sweep can be cut into chunks (for progress reporting,
output buffering and wall-clock budgets) without recursion.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get("COVSYS_NUMBA", "1") != "0"
BACKEND = "numba" if USE_NUMBA else "numpy"


def _jit(fn):
    if USE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


# ---------------------------------------------------------------------------
# coverage scan

def _coverage_counts_loop(residues, moduli, period):
    counts = np.zeros(period, dtype=np.int64)
    for s in range(residues.shape[0]):
        for x in range(residues[s], period, moduli[s]):
            counts[x] += 1
    return counts


def _coverage_counts_numpy(residues, moduli, period):
    counts = np.zeros(period, dtype=np.int64)
    for a, n in zip(residues.tolist(), moduli.tolist()):
        counts[a::n] += 1
    return counts


_coverage_counts_nb = _jit(_coverage_counts_loop)


def coverage_counts(residues, moduli, period, backend=None):
    """Number of classes containing each residue in ``[0, period)``."""
    residues = np.ascontiguousarray(residues, dtype=np.int64)
    moduli = np.ascontiguousarray(moduli, dtype=np.int64)
    if (backend or BACKEND) == "numba" and USE_NUMBA:
        return _coverage_counts_nb(residues, moduli, int(period))
    return _coverage_counts_numpy(residues, moduli, int(period))


# ---------------------------------------------------------------------------
# exhaustive 0/1 vanishing scan over Z/m

def _vanishing_subsets_loop(m, rem_table, coset_masks, out):
    # Gray-code walk over all nonzero masks; acc holds sum of rem_table rows.
    width = rem_table.shape[1]
    acc = np.zeros(width, dtype=np.int64)
    n_vanish = 0
    n_bad = 0
    mask = np.uint64(0)
    total = np.uint64(1) << np.uint64(m)
    i = np.uint64(1)
    while i < total:
        bit = 0
        t = i
        while (t & np.uint64(1)) == np.uint64(0):
            t >>= np.uint64(1)
            bit += 1
        b = np.uint64(1) << np.uint64(bit)
        if mask & b:
            mask ^= b
            for c in range(width):
                acc[c] -= rem_table[bit, c]
        else:
            mask |= b
            for c in range(width):
                acc[c] += rem_table[bit, c]
        zero = True
        for c in range(width):
            if acc[c] != 0:
                zero = False
                break
        if zero:
            if n_vanish < out.shape[0]:
                out[n_vanish] = mask
            n_vanish += 1
            hit = False
            for j in range(coset_masks.shape[0]):
                if (mask & coset_masks[j]) == coset_masks[j]:
                    hit = True
                    break
            if not hit:
                n_bad += 1
        i += np.uint64(1)
    return n_vanish, n_bad


_vanishing_subsets_nb = _jit(_vanishing_subsets_loop)


def _vanishing_subsets_numpy(m, rem_table, coset_masks, out, chunk=1 << 16):
    n_vanish = 0
    n_bad = 0
    shifts = np.arange(m, dtype=np.uint64)
    total = 1 << m
    for lo in range(1, total, chunk):
        masks = np.arange(lo, min(lo + chunk, total), dtype=np.uint64)
        bits = ((masks[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.int64)
        hits = masks[~(bits @ rem_table).any(axis=1)]
        if hits.size:
            take = min(hits.size, out.shape[0] - n_vanish)
            if take > 0:
                out[n_vanish:n_vanish + take] = hits[:take]
            n_vanish += hits.size
            covered = ((hits[:, None] & coset_masks[None, :]) == coset_masks[None, :]).any(axis=1)
            n_bad += int((~covered).sum())
    return n_vanish, n_bad


def vanishing_subsets(m, rem_table, coset_masks, capacity=1 << 16, backend=None):
    """Scan every nonzero subset of Z/m (m <= 63) for vanishing sums.

    ``rem_table[i]`` must hold the coefficients of ``x**i mod Phi_m``, so a
    subset vanishes iff its rows sum to zero. ``coset_masks`` are bitmasks of
    the prime-order cosets. Returns ``(masks, n_vanishing, n_without_coset)``
    where ``masks`` lists the vanishing subsets (truncated to ``capacity``).
    """
    if not 1 <= m <= 63:
        raise ValueError(f"subset scan needs 1 <= m <= 63, got {m}")
    rem_table = np.ascontiguousarray(rem_table, dtype=np.int64)
    coset_masks = np.ascontiguousarray(coset_masks, dtype=np.uint64)
    out = np.zeros(capacity, dtype=np.uint64)
    if (backend or BACKEND) == "numba" and USE_NUMBA:
        n_vanish, n_bad = _vanishing_subsets_nb(m, rem_table, coset_masks, out)
    else:
        n_vanish, n_bad = _vanishing_subsets_numpy(m, rem_table, coset_masks, out)
    n_vanish = int(n_vanish)
    return out[:min(n_vanish, capacity)].copy(), n_vanish, int(n_bad)


# ---------------------------------------------------------------------------
# reduction step on array-encoded systems
#
# A system is (res[:k], dix[:k]): residue and index into the sorted divisor
# list D of some period N. divmat[i, j] is True iff D[i] | D[j];
# primes[i, :nprimes[i]] are the prime divisors of D[i] in increasing order;
# idx_of[v] is the index of v in D (or -1).

STEP_OK = 0
STEP_TRIVIAL = 1
STEP_NO_ELIGIBLE = 2
STEP_NO_COSET = 3


def _reduce_step_loop(res, dix, k, D, divmat, nprimes, primes, idx_of, present, occ, info):
    """Merge one prime-order coset at the smallest eligible maximal modulus.

    Writes (divisor index of n_r, p, d) to info[0:3] and returns
    (status, new k). On STEP_OK the arrays are compacted in place.
    """
    nd = D.shape[0]
    for i in range(nd):
        present[i] = 0
    for s in range(k):
        present[dix[s]] += 1
    if k == 1 and D[dix[0]] == 1:
        return STEP_TRIVIAL, k
    chosen = -1
    for i in range(nd):
        if present[i] == 0:
            continue
        maximal = True
        for j in range(nd):
            if j != i and present[j] > 0 and divmat[i, j]:
                maximal = False
                break
        if maximal and nprimes[i] <= 2:
            chosen = i
            break
    if chosen < 0:
        return STEP_NO_ELIGIBLE, k
    n = D[chosen]
    for x in range(n):
        occ[x] = 0
    for s in range(k):
        if dix[s] == chosen:
            occ[res[s]] += 1
    found_p = 0
    found_d = 0
    for q in range(nprimes[chosen]):
        p = primes[chosen, q]
        step = n // p
        for d in range(step):
            ok = True
            for j in range(p):
                if occ[d + j * step] == 0:
                    ok = False
                    break
            if ok:
                found_p = p
                found_d = d
                break
        if found_p:
            break
    if found_p == 0:
        info[0] = chosen
        return STEP_NO_COSET, k
    step = n // found_p
    # occ now marks one occurrence to drop per coset member
    for x in range(n):
        occ[x] = 0
    for j in range(found_p):
        occ[found_d + j * step] = 1
    w = 0
    for s in range(k):
        if dix[s] == chosen and occ[res[s]] == 1:
            occ[res[s]] = 0
            continue
        res[w] = res[s]
        dix[w] = dix[s]
        w += 1
    res[w] = found_d
    dix[w] = idx_of[step]
    info[0] = chosen
    info[1] = found_p
    info[2] = found_d
    return STEP_OK, w + 1


_reduce_step_nb = _jit(_reduce_step_loop)


def _is_exact_loop(res, dix, k, D, period, cov):
    for x in range(period):
        cov[x] = 0
    for s in range(k):
        for x in range(res[s], period, D[dix[s]]):
            cov[x] += 1
    for x in range(period):
        if cov[x] != 1:
            return False
    return True


_is_exact_nb = _jit(_is_exact_loop)

# leaf modes
MODE_COUNT = 0
MODE_COLLECT = 1
MODE_THEOREM_A = 2
MODE_COROLLARY1 = 3
MODE_STRUCTURE = 4

# stats slots
S_LEAVES = 0
S_TRIVIAL = 1
S_CHECKED = 2
S_FAIL = 3
S_INELIGIBLE = 4
S_SKIPPED = 5
S_CLASSES = 6
S_STEPS = 7
N_STATS = 8

# failure codes recorded in fail_info[0]
FAIL_NO_COSET = 1
FAIL_NOT_EXACT = 2
FAIL_COUNT = 3
FAIL_REPLAY = 4
FAIL_PRIME_SUM = 5
FAIL_MULTIPLICITY = 6
FAIL_COPRIME = 7
FAIL_NO_ELIGIBLE = 8


@_jit
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _leaf_check(mode, res, dix, k, N, D, divmat, nprimes, primes, idx_of,
                wres, wdix, tr_d, tr_n, tr_p, present, occ, cov, info, sortbuf):
    """Return 0 on success, -1 if the leaf is skipped, -2 if ineligible, else a FAIL_* code."""
    if mode == MODE_STRUCTURE:
        if k == 1:
            return 0
        top = 0
        for s in range(k):
            if D[dix[s]] > top:
                top = D[dix[s]]
        cnt = 0
        for s in range(k):
            if D[dix[s]] == top:
                cnt += 1
        if cnt < 2:
            return FAIL_MULTIPLICITY
        for s in range(k):
            for t in range(s + 1, k):
                a = D[dix[s]]
                b = D[dix[t]]
                if a > 1 and b > 1 and _gcd(a, b) == 1:
                    return FAIL_COPRIME
        return 0

    for s in range(k):
        wres[s] = res[s]
        wdix[s] = dix[s]

    if mode == MODE_THEOREM_A:
        status, k2 = _reduce_step_nb(wres, wdix, k, D, divmat, nprimes, primes, idx_of, present, occ, info)
        if status == STEP_NO_ELIGIBLE:
            return -2
        if status == STEP_NO_COSET:
            return FAIL_NO_COSET
        if k - k2 != info[1] - 1:
            return FAIL_COUNT
        if not _is_exact_nb(wres, wdix, k2, D, N, cov):
            return FAIL_NOT_EXACT
        return 0

    # MODE_COROLLARY1: only systems whose moduli all have <= 2 prime factors
    for s in range(k):
        if nprimes[dix[s]] > 2:
            return -1
    kk = k
    nsteps = 0
    while True:
        status, k2 = _reduce_step_nb(wres, wdix, kk, D, divmat, nprimes, primes, idx_of, present, occ, info)
        if status == STEP_TRIVIAL:
            break
        if status == STEP_NO_ELIGIBLE:
            return FAIL_NO_ELIGIBLE
        if status == STEP_NO_COSET:
            return FAIL_NO_COSET
        tr_d[nsteps] = info[2]
        tr_n[nsteps] = D[info[0]] // info[1]
        tr_p[nsteps] = info[1]
        nsteps += 1
        kk = k2
    psum = 0
    for t in range(nsteps):
        psum += tr_p[t] - 1
    if psum != k - 1:
        return FAIL_PRIME_SUM
    # replay coarse-to-fine from {0(1)}
    wres[0] = 0
    wdix[0] = idx_of[1]
    kk = 1
    for t in range(nsteps - 1, -1, -1):
        pos = -1
        target = idx_of[tr_n[t]]
        for s in range(kk):
            if wdix[s] == target and wres[s] == tr_d[t]:
                pos = s
                break
        if pos < 0:
            return FAIL_REPLAY
        child = idx_of[tr_n[t] * tr_p[t]]
        wres[pos] = tr_d[t]
        wdix[pos] = child
        for j in range(1, tr_p[t]):
            wres[kk] = tr_d[t] + j * tr_n[t]
            wdix[kk] = child
            kk += 1
    if kk != k:
        return FAIL_REPLAY
    for s in range(k):
        sortbuf[s] = dix[s] * N + res[s]
        sortbuf[k + s] = wdix[s] * N + wres[s]
    a = np.sort(sortbuf[:k])
    b = np.sort(sortbuf[k:2 * k])
    for s in range(k):
        if a[s] != b[s]:
            return FAIL_REPLAY
    info[3] = nsteps
    return 0


_leaf_check_nb = _jit(_leaf_check)


def _cover_sweep_loop(N, D, divmat, nprimes, primes, idx_of, mode, budget,
                      covered, res, dix, start, state, stats,
                      out_res, out_mod, out_off, fail_res, fail_dix, fail_info):
    """Advance the exact-cover DFS by at most ``budget`` leaves.

    state = [depth, ncov, done, n_out, n_out_classes]. Returns the number of
    leaves visited in this call.
    """
    nd = D.shape[0]
    wres = np.empty(N + 1, dtype=np.int64)
    wdix = np.empty(N + 1, dtype=np.int64)
    tr_d = np.empty(N + 1, dtype=np.int64)
    tr_n = np.empty(N + 1, dtype=np.int64)
    tr_p = np.empty(N + 1, dtype=np.int64)
    present = np.empty(nd, dtype=np.int64)
    occ = np.empty(N + 1, dtype=np.int64)
    cov = np.empty(N, dtype=np.int64)
    info = np.zeros(4, dtype=np.int64)
    sortbuf = np.empty(2 * N + 2, dtype=np.int64)
    depth = state[0]
    ncov = state[1]
    leaves = 0
    state[3] = 0
    state[4] = 0
    out_off[0] = 0
    while leaves < budget:
        if depth < 0:
            state[2] = 1
            break
        if ncov == N:
            k = depth
            stats[S_LEAVES] += 1
            stats[S_CLASSES] += k
            if mode == MODE_COLLECT:
                j = state[3]
                base = state[4]
                for s in range(k):
                    out_res[base + s] = res[s]
                    out_mod[base + s] = D[dix[s]]
                state[3] = j + 1
                state[4] = base + k
                out_off[j + 1] = base + k
            elif mode != MODE_COUNT:
                if k == 1 and mode != MODE_STRUCTURE:
                    stats[S_TRIVIAL] += 1
                else:
                    code = _leaf_check_nb(mode, res, dix, k, N, D, divmat, nprimes, primes, idx_of,
                                          wres, wdix, tr_d, tr_n, tr_p, present, occ, cov, info, sortbuf)
                    if code == -1:
                        stats[S_SKIPPED] += 1
                    elif code == -2:
                        stats[S_INELIGIBLE] += 1
                    else:
                        stats[S_CHECKED] += 1
                        if mode == MODE_COROLLARY1 and code == 0:
                            stats[S_STEPS] += info[3]
                        if code > 0:
                            if stats[S_FAIL] == 0:
                                for s in range(k):
                                    fail_res[s] = res[s]
                                    fail_dix[s] = dix[s]
                                fail_info[0] = code
                                fail_info[1] = k
                            stats[S_FAIL] += 1
            leaves += 1
            depth -= 1
            if depth < 0:
                continue
            n = D[dix[depth]]
            for x in range(res[depth], N, n):
                covered[x] = 0
            ncov -= N // n
            start[depth] = dix[depth] + 1
            continue
        r = res[depth - 1] + 1 if depth > 0 else 0
        while covered[r]:
            r += 1
        placed = False
        i = start[depth]
        while i < nd:
            n = D[i]
            if n > r:
                ok = True
                for x in range(r, N, n):
                    if covered[x]:
                        ok = False
                        break
                if ok:
                    for x in range(r, N, n):
                        covered[x] = 1
                    ncov += N // n
                    res[depth] = r
                    dix[depth] = i
                    depth += 1
                    start[depth] = 0
                    placed = True
                    break
            i += 1
        if not placed:
            depth -= 1
            if depth < 0:
                continue
            n = D[dix[depth]]
            for x in range(res[depth], N, n):
                covered[x] = 0
            ncov -= N // n
            start[depth] = dix[depth] + 1
    state[0] = depth
    state[1] = ncov
    if depth < 0:
        state[2] = 1
    return leaves


_cover_sweep_nb = _jit(_cover_sweep_loop)


def cover_sweep(N, D, divmat, nprimes, primes, idx_of, mode, budget, arrays):
    """Run one chunk of the DFS; ``arrays`` is the dict built by ``new_sweep_arrays``."""
    a = arrays
    return int(_cover_sweep_nb(
        N, D, divmat, nprimes, primes, idx_of, mode, budget,
        a["covered"], a["res"], a["dix"], a["start"], a["state"], a["stats"],
        a["out_res"], a["out_mod"], a["out_off"], a["fail_res"], a["fail_dix"], a["fail_info"],
    ))


def new_sweep_arrays(N, out_systems=0):
    out_systems = max(int(out_systems), 1)
    return {
        "covered": np.zeros(N, dtype=np.uint8),
        "res": np.zeros(N + 1, dtype=np.int64),
        "dix": np.zeros(N + 1, dtype=np.int64),
        "start": np.zeros(N + 2, dtype=np.int64),
        "state": np.zeros(5, dtype=np.int64),
        "stats": np.zeros(N_STATS, dtype=np.int64),
        "out_res": np.zeros(out_systems * N, dtype=np.int64),
        "out_mod": np.zeros(out_systems * N, dtype=np.int64),
        "out_off": np.zeros(out_systems + 1, dtype=np.int64),
        "fail_res": np.zeros(N + 1, dtype=np.int64),
        "fail_dix": np.zeros(N + 1, dtype=np.int64),
        "fail_info": np.zeros(2, dtype=np.int64),
    }


def reduce_step_arrays(res, dix, k, D, divmat, nprimes, primes, idx_of):
    """Single reduction step on copies of ``res``/``dix``; for cross-checking."""
    N = int(D[-1])
    res = np.array(res, dtype=np.int64)
    dix = np.array(dix, dtype=np.int64)
    res = np.concatenate([res, np.zeros(1, dtype=np.int64)])
    dix = np.concatenate([dix, np.zeros(1, dtype=np.int64)])
    present = np.empty(D.shape[0], dtype=np.int64)
    occ = np.empty(N + 1, dtype=np.int64)
    info = np.zeros(4, dtype=np.int64)
    status, k2 = _reduce_step_nb(res, dix, k, D, divmat, nprimes, primes, idx_of, present, occ, info)
    return int(status), res[:k2], dix[:k2], (int(info[0]), int(info[1]), int(info[2]))

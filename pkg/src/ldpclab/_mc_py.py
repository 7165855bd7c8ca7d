"""Pure-Python Metropolis sweep kernel.

Reference implementation of the compiled kernel in `_mc_cy`; both consume
randomness through the same counter-based scheme (see `rng`), so given the
same stream seed they produce bit-identical trajectories.  Sites are
visited in index order within a sweep; flipping site j costs
dE = 2*(deg_j - 2*unsat_j) where unsat_j counts currently violated checks
touching j.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def run_sweeps(col_ptr, col_idx, error, synd, beta, stream_seed,
               first_sweep, nsweeps, stop_weight=-1):
    """Run Metropolis sweeps in place.

    Args:
        col_ptr, col_idx: CSR-by-column layout of H (check indices per bit).
        error: uint8[n] current error, updated in place.
        synd: uint8[m] current syndrome of `error`, updated in place.
        beta: inverse temperature (already capped by the caller).
        stream_seed: 64-bit stream seed.
        first_sweep: global index of the first sweep (drives the counter).
        nsweeps: number of sweeps to attempt.
        stop_weight: if >= 0, stop at the end of any sweep whose final
            syndrome weight is <= this value.

    Returns:
        (syndrome_weight, sweeps_done)
    """
    n = len(error)
    cp = [int(v) for v in col_ptr]
    ci = [int(v) for v in col_idx]
    e = [int(v) for v in error]
    s = [int(v) for v in synd]
    weight = sum(s)
    maxdeg = max((cp[j + 1] - cp[j] for j in range(n)), default=0)
    acc = [math.exp(-beta * d) for d in range(2 * maxdeg + 1)]
    seed = int(stream_seed) & _MASK
    sweeps_done = nsweeps
    for t in range(nsweeps):
        base = (first_sweep + t) * n
        for j in range(n):
            start = cp[j]
            stop = cp[j + 1]
            deg = stop - start
            unsat = 0
            for p in range(start, stop):
                unsat += s[ci[p]]
            dE = 2 * (deg - 2 * unsat)
            if dE > 0:
                x = (seed + ((base + j + 1) * _GOLDEN)) & _MASK
                x ^= x >> 30
                x = (x * 0xBF58476D1CE4E5B9) & _MASK
                x ^= x >> 27
                x = (x * 0x94D049BB133111EB) & _MASK
                x ^= x >> 31
                if (x >> 11) * (1.0 / 9007199254740992.0) >= acc[dE]:
                    continue
            e[j] ^= 1
            for p in range(start, stop):
                c = ci[p]
                if s[c]:
                    s[c] = 0
                    weight -= 1
                else:
                    s[c] = 1
                    weight += 1
        if 0 <= stop_weight and weight <= stop_weight:
            sweeps_done = t + 1
            break
    error[:] = np.asarray(e, dtype=np.uint8)
    synd[:] = np.asarray(s, dtype=np.uint8)
    return weight, sweeps_done

# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Metropolis sweep kernel.

Must stay in lockstep with `_mc_py.run_sweeps`: same site order, same
counter-based randomness, same acceptance rule, so the two kernels emit
bit-identical trajectories.
"""

from libc.math cimport exp
from libc.stdlib cimport free, malloc

import numpy as np


cdef inline double _uniform(unsigned long long seed,
                            unsigned long long counter) noexcept nogil:
    cdef unsigned long long x = seed + (counter + 1ULL) * 0x9E3779B97F4A7C15ULL
    x ^= x >> 30
    x *= 0xBF58476D1CE4E5B9ULL
    x ^= x >> 27
    x *= 0x94D049BB133111EBULL
    x ^= x >> 31
    return <double>(x >> 11) * (1.0 / 9007199254740992.0)


def run_sweeps(int[::1] col_ptr, int[::1] col_idx,
               unsigned char[::1] error, unsigned char[::1] synd,
               double beta, unsigned long long stream_seed,
               long long first_sweep, long long nsweeps,
               long long stop_weight=-1):
    """Same contract as `_mc_py.run_sweeps`."""
    cdef Py_ssize_t n = error.shape[0]
    cdef Py_ssize_t m = synd.shape[0]
    cdef long long weight = 0
    cdef long long sweeps_done = nsweeps
    cdef Py_ssize_t i, j, p
    cdef long long t, base
    cdef int start, stop, deg, unsat, dE, c
    cdef int maxdeg = 0
    cdef double u
    cdef double* acc

    for i in range(m):
        weight += synd[i]
    for j in range(n):
        deg = col_ptr[j + 1] - col_ptr[j]
        if deg > maxdeg:
            maxdeg = deg
    acc = <double*> malloc((2 * maxdeg + 1) * sizeof(double))
    if acc == NULL:
        raise MemoryError()
    for i in range(2 * maxdeg + 1):
        acc[i] = exp(-beta * i)

    with nogil:
        for t in range(nsweeps):
            base = (first_sweep + t) * n
            for j in range(n):
                start = col_ptr[j]
                stop = col_ptr[j + 1]
                deg = stop - start
                unsat = 0
                for p in range(start, stop):
                    unsat += synd[col_idx[p]]
                dE = 2 * (deg - 2 * unsat)
                if dE > 0:
                    u = _uniform(stream_seed, <unsigned long long>(base + j))
                    if u >= acc[dE]:
                        continue
                error[j] ^= 1
                for p in range(start, stop):
                    c = col_idx[p]
                    if synd[c]:
                        synd[c] = 0
                        weight -= 1
                    else:
                        synd[c] = 1
                        weight += 1
            if 0 <= stop_weight and weight <= stop_weight:
                sweeps_done = t + 1
                break
    free(acc)
    return int(weight), int(sweeps_done)

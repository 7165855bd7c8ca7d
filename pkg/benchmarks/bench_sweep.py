"""Benchmark the compiled Metropolis kernel against the pure-Python one.

Run:  python3 benchmarks/bench_sweep.py
"""

import time

import numpy as np

from ldpclab import _mc_cy, _mc_py, codes, dynamics


def bench(kernel, cp, ci, n, m, nsweeps, beta=1.0, seed=12345):
    error = np.zeros(n, dtype=np.uint8)
    synd = np.zeros(m, dtype=np.uint8)
    t0 = time.perf_counter()
    weight, done = kernel.run_sweeps(cp, ci, error, synd, beta, seed, 0, nsweeps)
    dt = time.perf_counter() - t0
    return weight, done * n / dt, dt


def main():
    print(f"active kernel: {'compiled' if dynamics.USING_COMPILED else 'pure python'}")
    print(f"{'n':>6} {'sweeps':>7} {'compiled upd/s':>15} {'python upd/s':>13} "
          f"{'speedup':>8} {'match':>6}")
    for n, nsweeps_c, nsweeps_p in [(100, 20000, 200), (1000, 5000, 20),
                                    (10000, 500, 2)]:
        code = codes.sample_regular_code(n, 4, 5, seed=1)
        cp, ci = dynamics.matrix_columns_csr(code.H)
        w_c, rate_c, _ = bench(_mc_cy, cp, ci, code.n, code.m, nsweeps_c)
        w_p, rate_p, _ = bench(_mc_py, cp, ci, code.n, code.m, nsweeps_p)
        # Cross-check trajectories over a common prefix.
        e1 = np.zeros(code.n, dtype=np.uint8)
        s1 = np.zeros(code.m, dtype=np.uint8)
        e2 = e1.copy()
        s2 = s1.copy()
        _mc_cy.run_sweeps(cp, ci, e1, s1, 1.0, 12345, 0, nsweeps_p)
        _mc_py.run_sweeps(cp, ci, e2, s2, 1.0, 12345, 0, nsweeps_p)
        match = np.array_equal(e1, e2) and np.array_equal(s1, s2)
        print(f"{n:>6} {nsweeps_c:>7} {rate_c:>15.3g} {rate_p:>13.3g} "
              f"{rate_c / rate_p:>8.1f} {str(match):>6}")


if __name__ == "__main__":
    main()

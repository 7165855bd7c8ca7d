"""Metropolis dynamics of check Hamiltonians.

The sweep kernel is compiled when available; set LDPCLAB_PURE_PY=1 to
force the pure-Python fallback.  Both kernels draw randomness through the
counter-based scheme in `rng`, so a trajectory is a pure function of
(matrix, initial state, stream seed) regardless of kernel, platform, or
how the sweeps are chunked.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import f2, rng

if os.environ.get("LDPCLAB_PURE_PY"):
    from . import _mc_py as _kernel
    USING_COMPILED = False
else:
    try:
        from . import _mc_cy as _kernel  # type: ignore[attr-defined]
        USING_COMPILED = True
    except ImportError:
        from . import _mc_py as _kernel
        USING_COMPILED = False

BETA_CAP = 50.0  # e^{-2*50*deg} underflows anyway; larger betas are clamped


def effective_beta(beta: float) -> float:
    if beta < 0:
        raise ValueError("need beta >= 0")
    return min(beta, BETA_CAP)


def columns_csr(row_supports: list[np.ndarray], n: int) -> tuple[np.ndarray, np.ndarray]:
    """CSR-by-column layout (check indices per bit) from row supports."""
    counts = np.zeros(n, dtype=np.int64)
    for supp in row_supports:
        counts[supp] += 1
    col_ptr = np.zeros(n + 1, dtype=np.int32)
    np.cumsum(counts, out=col_ptr[1:])
    col_idx = np.empty(int(col_ptr[-1]), dtype=np.int32)
    fill = col_ptr[:-1].astype(np.int64).copy()
    for c, supp in enumerate(row_supports):
        for j in supp:
            col_idx[fill[j]] = c
            fill[j] += 1
    return col_ptr, col_idx


def matrix_columns_csr(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    H = f2.as_binary(H)
    return columns_csr([np.nonzero(r)[0] for r in H], H.shape[1])


@dataclass
class SamplerState:
    """One Metropolis trajectory over the error configuration of a matrix."""

    col_ptr: np.ndarray
    col_idx: np.ndarray
    n: int
    m: int
    beta: float
    stream_seed: int
    error: np.ndarray = field(default=None)
    synd: np.ndarray = field(default=None)
    sweep: int = 0

    def __post_init__(self):
        self.beta = effective_beta(self.beta)
        if self.error is None:
            self.error = np.zeros(self.n, dtype=np.uint8)
        if self.synd is None:
            self.synd = self._syndrome_of(self.error)

    def _syndrome_of(self, e: np.ndarray) -> np.ndarray:
        s = np.zeros(self.m, dtype=np.uint8)
        cp, ci = self.col_ptr, self.col_idx
        for j in np.nonzero(e)[0]:
            s[ci[cp[j]:cp[j + 1]]] ^= 1
        return s

    @property
    def syndrome_weight(self) -> int:
        return int(self.synd.sum())

    def run(self, nsweeps: int, stop_weight: int = -1) -> tuple[int, int]:
        """Advance up to nsweeps sweeps; returns (weight, sweeps_done)."""
        weight, done = _kernel.run_sweeps(
            self.col_ptr, self.col_idx, self.error, self.synd,
            self.beta, self.stream_seed, self.sweep, nsweeps, stop_weight)
        self.sweep += done
        return weight, done


def sampler_for_matrix(H: np.ndarray, beta: float, master_seed: int,
                       *tags) -> SamplerState:
    cp, ci = matrix_columns_csr(H)
    H = f2.as_binary(H)
    return SamplerState(col_ptr=cp, col_idx=ci, n=H.shape[1], m=H.shape[0],
                        beta=beta,
                        stream_seed=rng.derive_stream(master_seed, *tags))


def sampler_for_rows(row_supports: list[np.ndarray], n: int, beta: float,
                     master_seed: int, *tags) -> SamplerState:
    cp, ci = columns_csr(row_supports, n)
    return SamplerState(col_ptr=cp, col_idx=ci, n=n, m=len(row_supports),
                        beta=beta,
                        stream_seed=rng.derive_stream(master_seed, *tags))


def css_sector_sampler(css, sector: str, beta: float, master_seed: int,
                       *tags) -> SamplerState:
    """Trajectory of one error sector of a CSS code.

    X errors are detected by the Z checks and vice versa.  The stream seed
    is tagged with the sector, so the X trajectory does not depend on
    whether the Z sector is simulated at all.
    """
    if sector == "X":
        rows = css.hz_rows
    elif sector == "Z":
        rows = css.hx_rows
    else:
        raise ValueError(f"sector must be 'X' or 'Z', got {sector!r}")
    return sampler_for_rows(rows, css.N, beta, master_seed, "sector", sector, *tags)


def flip_acceptance(dE: float, beta: float) -> float:
    """Metropolis acceptance min(1, e^{-beta dE})."""
    beta = effective_beta(beta)
    return 1.0 if dE <= 0 else math.exp(-beta * dE)


def detailed_balance_residual(H: np.ndarray, x: np.ndarray, j: int,
                              beta: float) -> float:
    """Relative violation of pi(x) P(x -> x^j) = pi(x^j) P(x^j -> x).

    Both flows are computed independently in floating point; analytically
    they are equal, so the residual isolates numerical error in the
    acceptance rule.
    """
    H = f2.as_binary(H)
    beta = effective_beta(beta)
    m = H.shape[0]
    E = 2.0 * int(f2.matvec(H, x).sum()) - m
    xp = x.copy()
    xp[j] ^= 1
    Ep = 2.0 * int(f2.matvec(H, xp).sum()) - m
    # Common factor e^{+beta*min(E, Ep)} keeps both flows in range.
    ref = min(E, Ep)
    lhs = math.exp(-beta * (E - ref)) * flip_acceptance(Ep - E, beta)
    rhs = math.exp(-beta * (Ep - ref)) * flip_acceptance(E - Ep, beta)
    return abs(lhs - rhs) / max(lhs, rhs)


def detailed_balance_max_residual(H: np.ndarray, beta: float, npairs: int,
                                  seed: int) -> float:
    H = f2.as_binary(H)
    n = H.shape[1]
    gen = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(npairs):
        x = gen.integers(0, 2, size=n, dtype=np.uint8)
        j = int(gen.integers(n))
        worst = max(worst, detailed_balance_residual(H, x, j, beta))
    return worst


def stationarity_tv(H: np.ndarray, beta: float, nsteps: int,
                    master_seed: int) -> float:
    """Total-variation gap between the chain's occupation law and Boltzmann.

    Runs nsteps single-site updates with uniformly random site choice over
    all 2^n states of a small model, counting the state after every
    update, and compares the empirical distribution with e^{-beta E}/Z.
    Random (not sequential) sites matter here: flat moves are accepted
    deterministically, so a fixed scan order can lock tiny systems into
    periodic orbits that never equilibrate.
    """
    H = f2.as_binary(H)
    m, n = H.shape
    if n > 20:
        raise ValueError("stationarity audit is exhaustive over 2^n states")
    beta = effective_beta(beta)
    states = np.arange(1 << n, dtype=np.uint64)
    X = ((states[:, None] >> np.arange(n, dtype=np.uint64)) & 1).astype(np.uint32)
    E = 2.0 * ((X @ H.T.astype(np.uint32)) & 1).sum(axis=1) - m
    logw = -beta * E
    logw -= logw.max()
    pi = np.exp(logw)
    pi /= pi.sum()
    # Energy change of flipping bit j from each state, as a lookup table.
    dE = np.empty((1 << n, n), dtype=np.float64)
    for j in range(n):
        dE[:, j] = E[states ^ np.uint64(1 << j)] - E
    acc = np.minimum(1.0, np.exp(-beta * dE))
    stream = rng.derive_stream(master_seed, "stationarity")
    counts = np.zeros(1 << n, dtype=np.int64)
    x = 0
    for step in range(nsteps):
        j = int(rng.uniform_at(stream, 2 * step) * n)
        if rng.uniform_at(stream, 2 * step + 1) < acc[x, j]:
            x ^= 1 << j
        counts[x] += 1
    emp = counts / nsteps
    return 0.5 * float(np.abs(emp - pi).sum())


def recursive_majority(x: np.ndarray, r: int) -> int:
    """Decode a spin configuration on the complete 3-ary tree.

    Leaves keep their value; every interior vertex takes the majority of
    its three children, bottom-up; the root's value is the logical bit.
    """
    vals = np.asarray(x, dtype=np.uint8).copy()
    for level in reversed(range(r)):
        lo = (3 ** level - 1) // 2
        hi = (3 ** (level + 1) - 1) // 2
        idx = np.arange(lo, hi)
        s = vals[3 * idx + 1].astype(np.int64)
        s += vals[3 * idx + 2]
        s += vals[3 * idx + 3]
        vals[idx] = s >= 2
    return int(vals[0])


def logical_hitting_time(tree, beta: float, master_seed: int, trial: int,
                         max_sweeps: int, check_every: int = 1) -> int | None:
    """Sweeps until the decoded logical bit first flips, from all zeros.

    The logical is evaluated every check_every sweeps (hitting times here
    span orders of magnitude, so a coarse stride costs no resolution).
    Returns None if the logical survives for max_sweeps sweeps.
    """
    st = sampler_for_matrix(tree.H, beta, master_seed, "tree", tree.r, trial)
    while st.sweep < max_sweeps:
        st.run(min(check_every, max_sweeps - st.sweep))
        if recursive_majority(st.error, tree.r):
            return st.sweep
    return None


def cluster_decompose(neighbors: list[np.ndarray],
                      error: np.ndarray) -> list[np.ndarray]:
    """Connected components of the error support in the adjacency graph."""
    support = set(np.nonzero(np.asarray(error, dtype=np.uint8))[0].tolist())
    seen: set[int] = set()
    clusters = []
    for v0 in sorted(support):
        if v0 in seen:
            continue
        comp = []
        stack = [v0]
        seen.add(v0)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in neighbors[v].tolist():
                if w in support and w not in seen:
                    seen.add(w)
                    stack.append(w)
        clusters.append(np.array(sorted(comp), dtype=np.int64))
    return clusters

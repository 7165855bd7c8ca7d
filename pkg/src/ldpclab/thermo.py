"""Exact thermodynamics of parity-check Hamiltonians.

The classical model puts a spin on every bit and an energy penalty on
every violated check: E(x) = 2|Hx| - m.  The CSS model does the same
independently for the X- and Z-check sectors.  Everything here is exact:
closed forms where the checks are independent, log-domain enumeration
otherwise, and a high-temperature/low-temperature duality relation whose
two sides are evaluated separately so they can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import f2
from .codes import TannerCode
from .errors import BudgetError
from .hgp import CssCode, repetition_cycle_matrix

ENUM_BUDGET_BITS = 26  # max exponent for any 2^x enumeration in this module


def energy_classical(H, x) -> int:
    """E(x) = 2 |Hx| - m."""
    H = f2.as_binary(H)
    return 2 * int(f2.matvec(H, x).sum()) - H.shape[0]


def _logsumexp(a: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    hi = a.max()
    return float(hi + np.log(np.exp(a - hi).sum()))


def log_Z_classical_analytic(code: TannerCode, beta: float) -> float:
    """log Z = k log 2 + m log(2 cosh beta); needs independent checks."""
    if code.redundancy != 0:
        raise ValueError("closed form requires full-row-rank H")
    return code.k * np.log(2.0) + code.m * np.log(2.0 * np.cosh(beta))


def syndrome_weight_histogram(H) -> np.ndarray:
    """counts[w] = #{x : |Hx| = w}, by enumerating all 2^n states."""
    H = f2.as_binary(H)
    m, n = H.shape
    if n > ENUM_BUDGET_BITS:
        raise BudgetError(f"2^{n} states exceed the enumeration budget")
    counts = np.zeros(m + 1, dtype=np.int64)
    chunk = 1 << 16
    Hu = H.astype(np.uint32)
    for start in range(0, 1 << n, chunk):
        stop = min(start + chunk, 1 << n)
        idx = np.arange(start, stop, dtype=np.uint64)
        X = ((idx[:, None] >> np.arange(n, dtype=np.uint64)) & 1).astype(np.uint32)
        w = ((X @ Hu.T) & 1).sum(axis=1)
        counts += np.bincount(w, minlength=m + 1)
    return counts


def log_Z_from_histogram(counts: np.ndarray, m: int, beta: float) -> float:
    w = np.arange(len(counts))
    mask = counts > 0
    terms = np.log(counts[mask].astype(np.float64)) - beta * (2.0 * w[mask] - m)
    return _logsumexp(terms)


def log_Z_bruteforce(H, beta: float) -> float:
    """log Z by exhaustive state enumeration (n <= 26)."""
    H = f2.as_binary(H)
    return log_Z_from_histogram(syndrome_weight_histogram(H), H.shape[0], beta)


def _colspace_weight_histogram(H) -> tuple[np.ndarray, int]:
    """counts[w] = #{s in colspace(H) : |s| = w}; returns (counts, rank)."""
    H = f2.as_binary(H)
    m = H.shape[0]
    R, pivots = f2.row_reduce(H.T)  # rows of R span the column space of H
    r = len(pivots)
    if r > ENUM_BUDGET_BITS:
        raise BudgetError(f"2^{r} column-space elements exceed the enumeration budget")
    B = R[:r].astype(np.uint32)
    counts = np.zeros(m + 1, dtype=np.int64)
    chunk = 1 << 16
    for start in range(0, 1 << r, chunk):
        stop = min(start + chunk, 1 << r)
        idx = np.arange(start, stop, dtype=np.uint64)
        C = ((idx[:, None] >> np.arange(r, dtype=np.uint64)) & 1).astype(np.uint32)
        w = ((C @ B) & 1).sum(axis=1)
        counts += np.bincount(w, minlength=m + 1)
    return counts, r


def log_Z_classical(code: TannerCode, beta: float) -> float:
    """log Z, exact for any H: closed form when the checks are independent,
    otherwise a sum over achievable syndromes weighted by coset size 2^k.
    """
    if code.redundancy == 0:
        return log_Z_classical_analytic(code, beta)
    counts, _ = _colspace_weight_histogram(code.H)
    return code.k * np.log(2.0) + log_Z_from_histogram(counts, code.m, beta)


def log_Z_css_analytic(code: CssCode, beta: float) -> float:
    """log Z = K log 2 + (M_X + M_Z) log(2 cosh beta); needs independent checks."""
    if code.rank_X != code.M_X or code.rank_Z != code.M_Z:
        raise ValueError("closed form requires independent X and Z checks")
    return code.K * np.log(2.0) + (code.M_X + code.M_Z) * np.log(2.0 * np.cosh(beta))


def log_Z_css(code: CssCode, beta: float) -> float:
    """Exact log Z of the CSS check Hamiltonian, redundant checks included.

    The spectrum factorizes over the two sectors: every achievable pair of
    syndrome patterns carries multiplicity 2^K, so
    Z = 2^K * S_X(beta) * S_Z(beta) with S_* a sum over the column space
    of the corresponding check matrix.
    """
    if code.rank_X == code.M_X and code.rank_Z == code.M_Z:
        return log_Z_css_analytic(code, beta)
    total = code.K * np.log(2.0)
    for rows, M in ((code.hx_rows, code.M_X), (code.hz_rows, code.M_Z)):
        H = np.zeros((M, code.N), dtype=np.uint8)
        for i, supp in enumerate(rows):
            H[i, supp] = 1
        counts, _ = _colspace_weight_histogram(H)
        total += log_Z_from_histogram(counts, M, beta)
    return total


def metacheck_matrix(H) -> np.ndarray:
    """Rows spanning the left null space of H (the check redundancies)."""
    basis = f2.left_nullspace_basis(H)
    if not basis:
        return np.zeros((0, f2.as_binary(H).shape[0]), dtype=np.uint8)
    return np.array(basis, dtype=np.uint8)


def kw_dual_beta(beta: float) -> float:
    """Dual inverse temperature: e^{-2 beta'} = tanh(beta)."""
    if beta <= 0:
        raise ValueError("need beta > 0")
    return -0.5 * float(np.log(np.tanh(beta)))


@dataclass(frozen=True)
class DualityReport:
    beta: float
    beta_dual: float
    log_Z: float
    log_Z_dual_form: float

    @property
    def rel_err(self) -> float:
        scale = max(abs(self.log_Z), 1.0)
        return abs(self.log_Z - self.log_Z_dual_form) / scale


def log_Z_dual_form(H, beta: float) -> float:
    """log Z evaluated through the low-temperature expansion.

    Resummation over check-redundancy patterns gives
    Z = 2^n (cosh beta)^m * sum_{q in F_2^r} (tanh beta)^{|M^T q|}
    with M the metacheck matrix.  For independent checks (r = 0) the sum
    is 1 and the expression collapses to the closed form.
    """
    H = f2.as_binary(H)
    m, n = H.shape
    M = metacheck_matrix(H)
    r = M.shape[0]
    if r > ENUM_BUDGET_BITS:
        raise BudgetError(f"2^{r} redundancy patterns exceed the enumeration budget")
    base = n * np.log(2.0) + m * float(np.log(np.cosh(beta)))
    log_t = float(np.log(np.tanh(beta)))
    Mu = M.astype(np.uint32)
    terms = []
    chunk = 1 << 16
    for start in range(0, 1 << r, chunk):
        stop = min(start + chunk, 1 << r)
        idx = np.arange(start, stop, dtype=np.uint64)
        Q = ((idx[:, None] >> np.arange(r, dtype=np.uint64)) & 1).astype(np.uint32)
        w = ((Q @ Mu) & 1).sum(axis=1)
        terms.append(w.astype(np.float64) * log_t)
    return base + _logsumexp(np.concatenate(terms))


def verify_kw_duality(H, beta: float) -> DualityReport:
    """Compare direct and dual evaluations of log Z at one temperature."""
    H = f2.as_binary(H)
    return DualityReport(beta=beta, beta_dual=kw_dual_beta(beta),
                         log_Z=log_Z_bruteforce(H, beta),
                         log_Z_dual_form=log_Z_dual_form(H, beta))


def free_energy_density(log_Z: float, n: int, beta: float) -> float:
    return -log_Z / (beta * n)


def triangle_matrix() -> np.ndarray:
    """Edge-vertex incidence of the 3-cycle."""
    return repetition_cycle_matrix(3)


def cycle_matrix(L: int) -> np.ndarray:
    return repetition_cycle_matrix(L)


def torus_ising_matrix(L: int = 3) -> np.ndarray:
    """Bond-site incidence of the L x L periodic square-lattice Ising model.

    n = L^2 spins, m = 2 L^2 bonds (right and down from each site); every
    plaquette and the two winding-parity constraints make the checks
    heavily redundant.
    """
    n = L * L
    H = np.zeros((2 * n, n), dtype=np.uint8)
    row = 0
    for i in range(L):
        for j in range(L):
            a = i * L + j
            H[row, a] = 1
            H[row, i * L + (j + 1) % L] = 1
            row += 1
            H[row, a] = 1
            H[row, ((i + 1) % L) * L + j] = 1
            row += 1
    return H

"""Syndrome decoders and failure classification.

All decoders consume a syndrome (not a noisy word) and return a candidate
error.  The workhorse pipeline for quantum sweeps is min-sum belief
propagation with an ordered-statistics (order 0) completion that always
satisfies the syndrome exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import f2


class Verdict(enum.Enum):
    SUCCESS = "success"
    LOGICAL_FAILURE = "logical_failure"
    DECODE_FAILURE = "decode_failure"


@dataclass
class DecodeResult:
    correction: np.ndarray
    converged: bool
    iterations: int
    method: str
    llr: np.ndarray | None = None


def _rows_dense(H) -> np.ndarray:
    return f2.as_binary(H)


def bit_flip(H, syndrome, max_rounds: int = 100) -> DecodeResult:
    """Sequential bit-flip decoding.

    A bit flips when strictly more than half of its checks are currently
    violated; the syndrome is updated immediately.  Stops on a zero
    syndrome or a full pass without flips.
    """
    H = _rows_dense(H)
    m, n = H.shape
    s = np.asarray(syndrome, dtype=np.uint8).copy()
    cols = [np.nonzero(H[:, j])[0] for j in range(n)]
    correction = np.zeros(n, dtype=np.uint8)
    for rnd in range(max_rounds):
        flipped = False
        for j in range(n):
            cj = cols[j]
            if 2 * int(s[cj].sum()) > cj.size:
                correction[j] ^= 1
                s[cj] ^= 1
                flipped = True
        if not s.any():
            return DecodeResult(correction, True, rnd + 1, "bit_flip")
        if not flipped:
            break
    return DecodeResult(correction, False, max_rounds, "bit_flip")


class MinSumBP:
    """Min-sum syndrome BP with a flooding schedule.

    Edge arrays are grouped by check so the check update runs on
    `np.minimum.reduceat` segments (min / second-min trick) with no
    per-check Python loop.
    """

    def __init__(self, row_supports: list[np.ndarray], n: int,
                 p: float = 0.05, scale: float = 1.0):
        if not 0.0 < p < 0.5:
            raise ValueError("need 0 < p < 0.5")
        self.n = n
        self.m = len(row_supports)
        self.prior = float(np.log((1.0 - p) / p))
        self.scale = float(scale)
        degs = np.array([len(s) for s in row_supports], dtype=np.int64)
        if (degs == 0).any():
            raise ValueError("empty check row")
        self.check_ptr = np.zeros(self.m + 1, dtype=np.int64)
        np.cumsum(degs, out=self.check_ptr[1:])
        self.edge_var = np.concatenate(row_supports).astype(np.int64)
        self.edge_check = np.repeat(np.arange(self.m), degs)
        self.nedges = self.edge_var.size
        self.row_supports = row_supports

    def _syndrome_of(self, e: np.ndarray) -> np.ndarray:
        bits = e[self.edge_var].astype(np.int64)
        acc = np.add.reduceat(bits, self.check_ptr[:-1])
        return (acc & 1).astype(np.uint8)

    def decode(self, syndrome: np.ndarray, iters: int = 10) -> DecodeResult:
        s = np.asarray(syndrome, dtype=np.uint8)
        syn_sign = 1.0 - 2.0 * s[self.edge_check].astype(np.float64)
        ptr = self.check_ptr[:-1]
        v2c = np.full(self.nedges, self.prior)
        total = np.full(self.n, self.prior)
        hard = np.zeros(self.n, dtype=np.uint8)
        for it in range(iters):
            neg = v2c < 0
            sgn = np.where(neg, -1.0, 1.0)
            nneg = np.add.reduceat(neg.astype(np.int64), ptr)
            # Sign excluding this edge: parity of the other negatives.
            out_sign = np.where(((nneg[self.edge_check] - neg) & 1).astype(bool),
                                -1.0, 1.0) * syn_sign
            mag = np.abs(v2c)
            min1 = np.minimum.reduceat(mag, ptr)
            pos = np.where(mag == min1[self.edge_check],
                           np.arange(self.nedges), self.nedges)
            first = np.minimum.reduceat(pos, ptr)
            mag2 = mag.copy()
            mag2[first] = np.inf
            min2 = np.minimum.reduceat(mag2, ptr)
            out_mag = min1[self.edge_check].copy()
            out_mag[first] = min2
            c2v = self.scale * out_sign * out_mag
            total = np.full(self.n, self.prior)
            np.add.at(total, self.edge_var, c2v)
            v2c = total[self.edge_var] - c2v
            hard = (total < 0).astype(np.uint8)
            if np.array_equal(self._syndrome_of(hard), s):
                return DecodeResult(hard, True, it + 1, "bp", llr=total)
        return DecodeResult(hard, False, iters, "bp", llr=total)


def osd0(H, syndrome, llr) -> np.ndarray | None:
    """Order-0 ordered-statistics completion.

    Columns are tried in increasing soft-LLR order (least reliable, i.e.
    most likely in error, first; ties broken by index); the first
    full-rank set of columns carries the solution, all other bits are 0.
    Returns None only if the syndrome is outside the column space.
    """
    H = _rows_dense(H)
    m, n = H.shape
    s = np.asarray(syndrome, dtype=np.uint8).ravel()
    order = np.argsort(np.asarray(llr, dtype=np.float64), kind="stable")
    aug = np.concatenate([H, s[:, None]], axis=1)
    W = f2.pack_rows(aug)
    pivots = f2._rref_packed(W, list(order) + [n])
    if pivots and pivots[-1] == n:
        return None
    R = f2.unpack_rows(W, n + 1)
    x = np.zeros(n, dtype=np.uint8)
    for r, pcol in enumerate(pivots):
        x[pcol] = R[r, n]
    return x


def decode_bp_osd(row_supports: list[np.ndarray], n: int, syndrome,
                  iters: int = 10, p: float = 0.05,
                  scale: float = 1.0) -> DecodeResult:
    """BP first; on non-convergence, complete with OSD-0 on the soft LLRs."""
    bp = MinSumBP(row_supports, n, p=p, scale=scale)
    res = bp.decode(syndrome, iters=iters)
    if res.converged:
        return res
    H = np.zeros((bp.m, n), dtype=np.uint8)
    for i, supp in enumerate(row_supports):
        H[i, supp] = 1
    x = osd0(H, syndrome, res.llr)
    if x is None:
        return DecodeResult(res.correction, False, res.iterations,
                            "bp+osd0", llr=res.llr)
    return DecodeResult(x, True, res.iterations, "bp+osd0", llr=res.llr)


def decode_bp_block_exact(css, syndrome, sector: str = "X", iters: int = 10,
                          p: float = 0.05, scale: float = 1.0) -> DecodeResult:
    """BP with an exact block completion, for large products.

    When BP does not converge, the leftover syndrome s ^ H c_bp is solved
    on the (bit, bit) qubit block alone.  For a product with second factor
    H2 the restricted system is block diagonal (one copy of H2 per first
    factor bit), so each block solves independently and the combined
    correction satisfies the syndrome exactly.  Asymptotically cheaper
    than dense OSD, but ignores soft information in the completion.
    """
    if sector != "X":
        raise NotImplementedError("block completion is wired for the X sector")
    rows = css.hz_rows
    bp = MinSumBP(rows, css.N, p=p, scale=scale)
    s = np.asarray(syndrome, dtype=np.uint8)
    res = bp.decode(s, iters=iters)
    if res.converged:
        return res
    leftover = bp._syndrome_of(res.correction) ^ s
    n1 = css.provenance["n1"]
    n2 = css.provenance["n2"]
    m2 = css.provenance["m2"]
    H2 = np.zeros((m2, n2), dtype=np.uint8)
    # Z-check (v1, e2) meets block-1 qubit (v1, v2) iff H2[e2, v2] = 1.
    for e2 in range(m2):
        for col in rows[e2]:
            if col < n2:
                H2[e2, col] = 1
    x = res.correction.copy()
    # Min-weight coset representative per block: a solve that lands in the
    # wrong coset is off by a factor codeword, which flips the product
    # logical, so with sparse noise the lighter representative wins.
    codewords = f2.nullspace_basis(H2)
    for v1 in range(n1):
        sub = leftover[v1 * m2:(v1 + 1) * m2]
        if not sub.any():
            continue
        y = f2.solve(H2, sub)
        if y is None:
            return DecodeResult(res.correction, False, res.iterations,
                                "bp+block", llr=res.llr)
        for cw in codewords:
            if int((y ^ cw).sum()) < int(y.sum()):
                y = y ^ cw
        x[v1 * n2:(v1 + 1) * n2] ^= y
    return DecodeResult(x, True, res.iterations, "bp+block", llr=res.llr)


def verdict_classical(H, error, correction) -> Verdict:
    """Success iff the residual is zero; a nonzero codeword residual is a
    logical failure; anything leaving a syndrome is a decode failure."""
    H = _rows_dense(H)
    residual = (np.asarray(error, dtype=np.uint8)
                ^ np.asarray(correction, dtype=np.uint8))
    if f2.matvec(H, residual).any():
        return Verdict.DECODE_FAILURE
    if residual.any():
        return Verdict.LOGICAL_FAILURE
    return Verdict.SUCCESS


def verdict_css(css, error, correction, sector: str = "X") -> Verdict:
    """Success iff the residual is a stabilizer of the same type."""
    residual = (np.asarray(error, dtype=np.uint8)
                ^ np.asarray(correction, dtype=np.uint8))
    if sector == "X":
        detector, stab = css.hz_rows, css.x_stabilizers
    elif sector == "Z":
        detector, stab = css.hx_rows, css.z_stabilizers
    else:
        raise ValueError(f"sector must be 'X' or 'Z', got {sector!r}")
    for supp in detector:
        if int(residual[supp].sum()) & 1:
            return Verdict.DECODE_FAILURE
    if stab.contains(residual):
        return Verdict.SUCCESS
    return Verdict.LOGICAL_FAILURE

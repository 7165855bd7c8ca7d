"""Exact GF(2) linear algebra on dense binary matrices.

Matrices are numpy uint8 arrays with entries in {0, 1}; vectors are 1-D
uint8 arrays.  Internally rows are packed into uint64 words so that row
XORs run word-parallel.  Elimination is deterministic: pivots are chosen
left to right (or along a caller-supplied column order) and the first
nonzero row wins, so every routine returns a canonical result.
"""

from __future__ import annotations

import numpy as np

_WORD = 64


def as_binary(M) -> np.ndarray:
    """Coerce to a 2-D uint8 array with entries reduced mod 2."""
    A = np.atleast_2d(np.asarray(M, dtype=np.uint8)) & 1
    return np.ascontiguousarray(A)


def pack_rows(M: np.ndarray) -> np.ndarray:
    """Pack the rows of a binary matrix into uint64 words (little bit order)."""
    A = as_binary(M)
    m, n = A.shape
    nwords = max(1, (n + _WORD - 1) // _WORD)
    packed = np.packbits(A, axis=1, bitorder="little")
    out = np.zeros((m, nwords * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return out.view(np.uint64)


def unpack_rows(W: np.ndarray, ncols: int) -> np.ndarray:
    """Inverse of :func:`pack_rows`."""
    W = np.atleast_2d(W)
    bits = np.unpackbits(W.view(np.uint8), axis=1, bitorder="little")
    return np.ascontiguousarray(bits[:, :ncols])


def _column_bits(W: np.ndarray, j: int) -> np.ndarray:
    return ((W[:, j >> 6] >> np.uint64(j & 63)) & np.uint64(1)).astype(np.uint8)


def _rref_packed(W: np.ndarray, col_order) -> list[int]:
    """In-place reduced row echelon form over GF(2).

    Returns the list of pivot columns, in the order they were chosen.
    """
    m = W.shape[0]
    pivots: list[int] = []
    r = 0
    for j in col_order:
        if r == m:
            break
        below = _column_bits(W[r:], j)
        nz = np.nonzero(below)[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            W[[r, p]] = W[[p, r]]
        col = _column_bits(W, j)
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            W[rows] ^= W[r]
        pivots.append(int(j))
        r += 1
    return pivots


def row_reduce(M, col_order=None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a binary matrix.

    Args:
        M: binary matrix.
        col_order: optional iterable of column indices giving the pivot
            search order (default left to right).

    Returns:
        (R, pivot_cols) where R is the RREF as uint8 and pivot_cols lists
        the pivot column of each of the first len(pivot_cols) rows of R.
    """
    A = as_binary(M)
    m, n = A.shape
    if m == 0 or n == 0:
        return A.copy(), []
    W = pack_rows(A)
    pivots = _rref_packed(W, range(n) if col_order is None else col_order)
    return unpack_rows(W, n), pivots


def rank(M) -> int:
    """GF(2) rank by Gaussian elimination."""
    A = as_binary(M)
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    W = pack_rows(A)
    return len(_rref_packed(W, range(A.shape[1])))


def nullspace_basis(M) -> list[np.ndarray]:
    """Canonical basis of the right kernel {v : Mv = 0}.

    The basis comes from the RREF: one vector per free column, with the
    free coordinate set to 1.  len(result) = cols - rank(M).
    """
    A = as_binary(M)
    m, n = A.shape
    R, pivots = row_reduce(A)
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        for r, p in enumerate(pivots):
            v[p] = R[r, f]
        basis.append(v)
    return basis


def left_nullspace_basis(M) -> list[np.ndarray]:
    """Basis of {v : v^T M = 0} (the metacheck directions)."""
    A = as_binary(M)
    return nullspace_basis(A.T)


def solve(M, s) -> np.ndarray | None:
    """Any particular solution e of M e = s, or None if s is not reachable.

    Free variables are set to zero, so the output is deterministic.
    """
    A = as_binary(M)
    m, n = A.shape
    b = np.asarray(s, dtype=np.uint8).ravel() & 1
    if b.shape[0] != m:
        raise ValueError(f"rhs length {b.shape[0]} != rows {m}")
    if m == 0:
        return np.zeros(n, dtype=np.uint8)
    aug = np.concatenate([A, b[:, None]], axis=1)
    W = pack_rows(aug)
    pivots = _rref_packed(W, range(n))
    R = unpack_rows(W, n + 1)
    # Inconsistent iff some row is all-zero in the M part but 1 in the rhs.
    nrows_used = len(pivots)
    if np.any(R[nrows_used:, n] != 0):
        return None
    x = np.zeros(n, dtype=np.uint8)
    for r, p in enumerate(pivots):
        x[p] = R[r, n]
    return x


def in_rowspace(M, v) -> bool:
    """True iff v lies in the GF(2) row space of M."""
    A = as_binary(M)
    w = np.asarray(v, dtype=np.uint8).ravel() & 1
    if w.shape[0] != A.shape[1]:
        raise ValueError(f"vector length {w.shape[0]} != cols {A.shape[1]}")
    return RowBasis(A).contains(w)


class RowBasis:
    """RREF of a matrix, reusable for many row-space membership queries.

    col_order is forwarded to :func:`row_reduce`; a structure-aware order
    (e.g. block-diagonal columns first) keeps elimination cheap on large
    product codes.
    """

    def __init__(self, M, col_order=None):
        A = as_binary(M)
        self.ncols = A.shape[1]
        if A.shape[0] == 0 or A.shape[1] == 0:
            self._W = np.zeros((0, 1), dtype=np.uint64)
            self.pivots: list[int] = []
            return
        W = pack_rows(A)
        self.pivots = _rref_packed(W, range(A.shape[1]) if col_order is None else col_order)
        self._W = W[: len(self.pivots)].copy()

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Reduce v modulo the row space; result is the canonical coset label."""
        w = pack_rows(np.asarray(v, dtype=np.uint8).reshape(1, -1))[0]
        for r, j in enumerate(self.pivots):
            if (w[j >> 6] >> np.uint64(j & 63)) & np.uint64(1):
                w ^= self._W[r]
        return unpack_rows(w.reshape(1, -1), self.ncols)[0]

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()


def matmul(A, B) -> np.ndarray:
    """Matrix product over GF(2)."""
    A = as_binary(A)
    B = as_binary(B)
    return (A.astype(np.uint32) @ B.astype(np.uint32) & 1).astype(np.uint8)


def matvec(A, x) -> np.ndarray:
    """Matrix-vector product over GF(2)."""
    A = as_binary(A)
    x = np.asarray(x, dtype=np.uint8).ravel() & 1
    return ((A.astype(np.uint32) @ x.astype(np.uint32)) & 1).astype(np.uint8)

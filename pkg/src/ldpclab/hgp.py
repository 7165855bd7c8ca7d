"""Quantum CSS codes from hypergraph products.

Qubit layout convention (fixed for all constructions here): block 1 holds
the (bit, bit) grid in row-major order, i.e. (i1, i2) -> i1*n2 + i2;
block 2 holds the (check, check) grid, (c1, c2) -> n1*n2 + c1*m2 + c2.
X-checks are indexed (c1, v2) -> c1*n2 + v2 and Z-checks
(v1, e2) -> v1*m2 + e2.

Check matrices are stored as per-row support lists so that large products
(tree codes) never materialize dense arrays; dense views are available
under a size budget.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import f2, io_alist
from .errors import BudgetError

DENSE_BUDGET = 300_000_000  # max entries for a dense check-matrix view
_ORTHO_EXACT_BUDGET = 50_000_000


def rows_of(H) -> list[np.ndarray]:
    """Per-row support lists of a dense binary matrix."""
    H = np.asarray(H, dtype=np.uint8)
    return [np.nonzero(r)[0].astype(np.int32) for r in H]


def rows_to_dense(rows: list[np.ndarray], ncols: int) -> np.ndarray:
    if len(rows) * ncols > DENSE_BUDGET:
        raise BudgetError(f"dense view of {len(rows)}x{ncols} exceeds budget")
    H = np.zeros((len(rows), ncols), dtype=np.uint8)
    for i, supp in enumerate(rows):
        H[i, supp] = 1
    return H


def rows_to_packed(rows: list[np.ndarray], ncols: int) -> np.ndarray:
    nwords = max(1, (ncols + 63) // 64)
    W = np.zeros((len(rows), nwords), dtype=np.uint64)
    for i, supp in enumerate(rows):
        for j in supp:
            W[i, int(j) >> 6] |= np.uint64(1) << np.uint64(int(j) & 63)
    return W


@dataclass
class CssCode:
    """A CSS code given by X- and Z-check supports over N qubits."""

    hx_rows: list[np.ndarray]
    hz_rows: list[np.ndarray]
    N: int
    block1: int  # number of (bit, bit) qubits; block 2 starts here
    provenance: dict
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._check_orthogonality()

    @property
    def M_X(self) -> int:
        return len(self.hx_rows)

    @property
    def M_Z(self) -> int:
        return len(self.hz_rows)

    @property
    def H_X(self) -> np.ndarray:
        if "HX" not in self._cache:
            self._cache["HX"] = rows_to_dense(self.hx_rows, self.N)
        return self._cache["HX"]

    @property
    def H_Z(self) -> np.ndarray:
        if "HZ" not in self._cache:
            self._cache["HZ"] = rows_to_dense(self.hz_rows, self.N)
        return self._cache["HZ"]

    def elimination_col_order(self) -> np.ndarray:
        """Column order that visits the (check, check) block first.

        For products of tree-like codes this keeps Gaussian elimination
        close to block diagonal, which avoids catastrophic fill-in.
        """
        return np.concatenate([np.arange(self.block1, self.N),
                               np.arange(self.block1)])

    def _basis(self, which: str) -> f2.RowBasis:
        key = f"basis_{which}"
        if key not in self._cache:
            rows = self.hx_rows if which == "x" else self.hz_rows
            W = rows_to_packed(rows, self.N)
            basis = f2.RowBasis.__new__(f2.RowBasis)
            basis.ncols = self.N
            basis.pivots = f2._rref_packed(W, self.elimination_col_order())
            basis._W = W[: len(basis.pivots)].copy()
            self._cache[key] = basis
        return self._cache[key]

    @property
    def x_stabilizers(self) -> f2.RowBasis:
        """Row basis of H_X (for stabilizer-equivalence tests of X errors)."""
        return self._basis("x")

    @property
    def z_stabilizers(self) -> f2.RowBasis:
        return self._basis("z")

    @property
    def rank_X(self) -> int:
        return self.x_stabilizers.rank

    @property
    def rank_Z(self) -> int:
        return self.z_stabilizers.rank

    @property
    def K(self) -> int:
        return self.N - self.rank_X - self.rank_Z

    def _check_orthogonality(self):
        Wx = rows_to_packed(self.hx_rows, self.N)
        Wz = rows_to_packed(self.hz_rows, self.N)
        if self.M_X * self.M_Z * Wx.shape[1] <= _ORTHO_EXACT_BUDGET:
            overlap = np.bitwise_count(Wx[:, None, :] & Wz[None, :, :]).sum(axis=2)
            if (overlap & 1).any():
                raise ValueError("H_X . H_Z^T != 0: not a CSS code")
        else:
            rng = np.random.default_rng(0)
            for _ in range(2000):
                a = rng.integers(self.M_X)
                b = rng.integers(self.M_Z)
                par = np.bitwise_count(Wx[a] & Wz[b]).sum() & 1
                if par:
                    raise ValueError("H_X . H_Z^T != 0: not a CSS code")


def hypergraph_product(H1, H2, provenance: dict | None = None) -> CssCode:
    """CSS code from the hypergraph product of two classical codes."""
    H1 = np.asarray(H1, dtype=np.uint8) & 1
    H2 = np.asarray(H2, dtype=np.uint8) & 1
    m1, n1 = H1.shape
    m2, n2 = H2.shape
    N = n1 * n2 + m1 * m2
    block1 = n1 * n2
    row1 = [np.nonzero(H1[c])[0] for c in range(m1)]
    col1 = [np.nonzero(H1[:, v])[0] for v in range(n1)]
    row2 = [np.nonzero(H2[e])[0] for e in range(m2)]
    col2 = [np.nonzero(H2[:, v])[0] for v in range(n2)]

    hx_rows = []
    for c1 in range(m1):
        for v2 in range(n2):
            supp1 = row1[c1] * n2 + v2
            supp2 = block1 + c1 * m2 + col2[v2]
            hx_rows.append(np.concatenate([supp1, supp2]).astype(np.int32))
    hz_rows = []
    for v1 in range(n1):
        for e2 in range(m2):
            supp1 = v1 * n2 + row2[e2]
            supp2 = block1 + col1[v1] * m2 + e2
            hz_rows.append(np.concatenate([supp1, supp2]).astype(np.int32))

    prov = {"construction": "hypergraph_product",
            "n1": n1, "m1": m1, "n2": n2, "m2": m2}
    if provenance:
        prov.update(provenance)
    return CssCode(hx_rows=hx_rows, hz_rows=hz_rows, N=N, block1=block1,
                   provenance=prov)


def repetition_cycle_matrix(L: int) -> np.ndarray:
    """Parity-check matrix of the length-L cyclic repetition code."""
    H = np.zeros((L, L), dtype=np.uint8)
    for i in range(L):
        H[i, i] = 1
        H[i, (i + 1) % L] = 1
    return H


def toric_code(L: int) -> CssCode:
    """Toric code on an L x L torus, as cycle x cycle hypergraph product."""
    if L < 3:
        raise ValueError("toric_code requires L >= 3 (L = 2 repeats incidences)")
    H = repetition_cycle_matrix(L)
    return hypergraph_product(H, H, provenance={"construction": "toric", "L": L})


@dataclass(frozen=True)
class TreeCode:
    """Repetition code on the complete 3-ary tree with r levels.

    Vertices are numbered level order (root 0, children of v at
    3v+1, 3v+2, 3v+3); edge e (e = 0..n-2) joins vertex e+1 to its parent.
    """

    r: int
    H: np.ndarray

    @property
    def n(self) -> int:
        return self.H.shape[1]

    @property
    def m(self) -> int:
        return self.H.shape[0]

    @property
    def n_interior(self) -> int:
        return (3 ** self.r - 1) // 2

    def parent(self, v: int) -> int:
        return (v - 1) // 3

    def leaf_range(self) -> tuple[int, int]:
        first = (3 ** self.r - 1) // 2
        return first, self.n


def tree_code(r: int) -> TreeCode:
    if r < 1:
        raise ValueError("need r >= 1")
    n = (3 ** (r + 1) - 1) // 2
    H = np.zeros((n - 1, n), dtype=np.uint8)
    for child in range(1, n):
        H[child - 1, child] = 1
        H[child - 1, (child - 1) // 3] = 1
    return TreeCode(r=r, H=H)


def tree_hgp(r1: int, r2: int) -> CssCode:
    """Asymmetric hypergraph product of two 3-ary tree repetition codes."""
    t1 = tree_code(r1)
    t2 = tree_code(r2)
    code = hypergraph_product(t1.H, t2.H,
                              provenance={"construction": "tree_hgp",
                                          "r1": r1, "r2": r2})
    return code


def css_distance_bruteforce(code: CssCode) -> int:
    """Minimum weight over nontrivial X-type and Z-type logicals (N <= 30)."""
    if code.N > 30:
        raise BudgetError(f"N = {code.N} too large for exhaustive logical search")
    if code.K == 0:
        raise ValueError("K = 0: no logical operators; distance undefined")
    best = code.N + 1
    for ker_of, stab in ((code.H_Z, code.x_stabilizers),
                        (code.H_X, code.z_stabilizers)):
        basis = f2.nullspace_basis(ker_of)
        k = len(basis)
        if k == 0:
            continue
        B = np.array(basis, dtype=np.uint8)
        for idx in range(1, 1 << k):
            coeff = np.array([(idx >> b) & 1 for b in range(k)], dtype=np.uint8)
            v = (coeff.astype(np.uint32) @ B.astype(np.uint32) & 1).astype(np.uint8)
            w = int(v.sum())
            if w < best and not stab.contains(v):
                best = w
    return best


def reduced_weight(code: CssCode, error: np.ndarray, sector: str = "X") -> int:
    """Minimum weight in the stabilizer orbit of an error (N <= 30).

    X errors are reduced modulo the row space of H_X, Z errors modulo H_Z.
    """
    if code.N > 30:
        raise BudgetError(f"N = {code.N} too large for exhaustive orbit search")
    rows = code.hx_rows if sector == "X" else code.hz_rows
    M = rows_to_dense(rows, code.N)
    basis = [M[i] for i in range(M.shape[0])]
    # Reduce to an independent generating set first.
    R, pivots = f2.row_reduce(M)
    gens = R[: len(pivots)]
    g = gens.shape[0]
    e = np.asarray(error, dtype=np.uint8) & 1
    best = int(e.sum())
    for idx in range(1, 1 << g):
        coeff = np.array([(idx >> b) & 1 for b in range(g)], dtype=np.uint8)
        v = (coeff.astype(np.uint32) @ gens.astype(np.uint32) & 1).astype(np.uint8)
        best = min(best, int((v ^ e).sum()))
    return best


def save_css(code: CssCode, basepath: str) -> None:
    """Persist as <basepath>.hx.alist / .hz.alist plus a JSON sidecar."""
    io_alist.write_alist(code.H_X, basepath + ".hx.alist")
    io_alist.write_alist(code.H_Z, basepath + ".hz.alist")
    meta = {"N": code.N, "K": code.K, "block1": code.block1,
            "provenance": code.provenance}
    with open(basepath + ".json", "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")


def load_css(basepath: str) -> CssCode:
    HX = io_alist.read_alist(basepath + ".hx.alist")
    HZ = io_alist.read_alist(basepath + ".hz.alist")
    with open(basepath + ".json") as fh:
        meta = json.load(fh)
    return CssCode(hx_rows=rows_of(HX), hz_rows=rows_of(HZ), N=meta["N"],
                   block1=meta["block1"], provenance=meta["provenance"])

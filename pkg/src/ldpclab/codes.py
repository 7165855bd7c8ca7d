"""Classical regular LDPC codes from the configuration model, plus the
brute-force structural checkers (distance, expansion, confinement,
extended low-energy excitations) used as correctness oracles at tiny scale.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import f2, io_alist
from .errors import BudgetError

ENUM_BUDGET = 2_000_000


@dataclass(frozen=True)
class TannerCode:
    """A parity-check matrix with regular-ensemble metadata."""

    H: np.ndarray
    delta_B: int
    delta_C: int
    seed: int | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.H.shape[1]

    @property
    def m(self) -> int:
        return self.H.shape[0]

    @property
    def rank(self) -> int:
        if "rank" not in self._cache:
            self._cache["rank"] = f2.rank(self.H)
        return self._cache["rank"]

    @property
    def k(self) -> int:
        return self.n - self.rank

    @property
    def redundancy(self) -> int:
        return self.m - self.rank

    def column_supports(self) -> list[np.ndarray]:
        if "cols" not in self._cache:
            self._cache["cols"] = [np.nonzero(self.H[:, j])[0].astype(np.int32)
                                   for j in range(self.n)]
        return self._cache["cols"]


def design_rate(delta_B: int, delta_C: int) -> float:
    """Design rate 1 - delta_B/delta_C of the regular ensemble."""
    if not delta_B < delta_C:
        raise ValueError("need delta_B < delta_C")
    return 1.0 - delta_B / delta_C


def sample_regular_code(n: int, delta_B: int, delta_C: int, seed: int,
                        max_resamples: int = 1000) -> TannerCode:
    """Sample a (delta_B, delta_C)-regular code via the configuration model.

    Bit and check edge stubs are paired by a uniform permutation and the
    whole pairing is resampled until the incidence is simple (no repeated
    bit-check pair), so every column weight is exactly delta_B and every
    row weight exactly delta_C.  For dense degrees a simple pairing is
    exponentially unlikely (the collision count concentrates near
    (delta_B-1)(delta_C-1)/2), so after the resampling budget is spent the
    remaining collisions are removed by random pair switches, which keep
    the degrees exact.  Deterministic given the seed either way.
    """
    if delta_B >= delta_C:
        raise ValueError("need delta_B < delta_C")
    if (n * delta_B) % delta_C != 0:
        raise ValueError(f"n*delta_B = {n * delta_B} not divisible by delta_C = {delta_C}")
    m = n * delta_B // delta_C
    if delta_C > n:
        raise ValueError(f"delta_C = {delta_C} exceeds n = {n}: no simple incidence")
    rng = np.random.default_rng(seed)
    nedges = n * delta_B
    bit_stubs = np.repeat(np.arange(n), delta_B)
    check_stubs = np.repeat(np.arange(m), delta_C)

    def build(paired):
        H = np.zeros((m, n), dtype=np.uint8)
        H[paired, bit_stubs] = 1
        assert (H.sum(axis=0) == delta_B).all() and (H.sum(axis=1) == delta_C).all()
        return TannerCode(H=H, delta_B=delta_B, delta_C=delta_C, seed=seed)

    resamples = max(1, min(max_resamples,
                           int(10 * np.exp((delta_B - 1) * (delta_C - 1) / 2))))
    for _ in range(resamples):
        paired = check_stubs[rng.permutation(nedges)]
        pairs = bit_stubs * m + paired
        if np.unique(pairs).size == pairs.size:
            return build(paired)

    # Switch repair: swap a colliding stub with a random partner.
    for _ in range(200 * nedges):
        pairs = bit_stubs * m + paired
        order = np.argsort(pairs, kind="stable")
        dup = order[1:][pairs[order][1:] == pairs[order][:-1]]
        if dup.size == 0:
            return build(paired)
        p = int(dup[0])
        q = int(rng.integers(nedges))
        paired[p], paired[q] = paired[q], paired[p]
    raise BudgetError(f"no simple pairing found for n={n} ({delta_B},{delta_C})")


def _weight_enum_cost(n: int, wmax: int) -> int:
    return sum(math.comb(n, w) for w in range(wmax + 1))


def code_distance_bruteforce(code: TannerCode | np.ndarray) -> int:
    """Minimum weight of a nonzero codeword, by enumerating all 2^k of them."""
    H = code.H if isinstance(code, TannerCode) else np.asarray(code, dtype=np.uint8)
    basis = f2.nullspace_basis(H)
    k = len(basis)
    if k == 0:
        raise ValueError("k = 0: the code has no nonzero codeword; distance undefined")
    if k > 24:
        raise BudgetError(f"2^{k} codewords exceed the enumeration budget")
    B = np.array(basis, dtype=np.uint8)
    best = H.shape[1] + 1
    chunk = 1 << 16
    for start in range(1, 1 << k, chunk):
        stop = min(start + chunk, 1 << k)
        idx = np.arange(start, stop, dtype=np.uint64)
        coeffs = ((idx[:, None] >> np.arange(k, dtype=np.uint64)) & 1).astype(np.uint8)
        words = (coeffs.astype(np.uint32) @ B.astype(np.uint32)) & 1
        best = min(best, int(words.sum(axis=1).min()))
    return best


def adjacency_graph(H: np.ndarray) -> list[np.ndarray]:
    """Neighbor lists of the code's adjacency graph.

    Vertices are bits; i ~ j iff some check contains both (simple graph,
    no self-loops).
    """
    H = np.asarray(H, dtype=np.uint8)
    n = H.shape[1]
    nbrs: list[set] = [set() for _ in range(n)]
    for row in H:
        supp = np.nonzero(row)[0]
        for a, b in itertools.combinations(supp.tolist(), 2):
            nbrs[a].add(b)
            nbrs[b].add(a)
    return [np.array(sorted(s), dtype=np.int64) for s in nbrs]


def check_expansion(code: TannerCode, gamma: float, delta: float,
                    side: str = "left") -> bool:
    """Exhaustively verify (gamma, delta) expansion on one side.

    Every subset B' of bits (checks, for side="right") with |B'| <= gamma*n
    must have |boundary| >= (1-delta) * degree * |B'|.  Exponential; budget
    gated.
    """
    if side == "left":
        H, deg = code.H, code.delta_B
    elif side == "right":
        H, deg = code.H.T, code.delta_C
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    n = H.shape[1]
    wmax = int(math.floor(gamma * n))
    if _weight_enum_cost(n, wmax) > ENUM_BUDGET:
        raise BudgetError(f"subset enumeration up to size {wmax} over {n} nodes too large")
    supports = [frozenset(np.nonzero(H[:, j])[0].tolist()) for j in range(n)]
    for w in range(1, wmax + 1):
        bound = (1.0 - delta) * deg * w
        for combo in itertools.combinations(range(n), w):
            boundary = set()
            for j in combo:
                boundary |= supports[j]
            if len(boundary) < bound:
                return False
    return True


@dataclass(frozen=True)
class ConfinementProfile:
    wmax: int
    min_syndrome: np.ndarray  # min_syndrome[w] = min over |e| = w of |He|


def confinement_profile(code: TannerCode, wmax: int) -> ConfinementProfile:
    """min |He| over all errors of each weight 0..wmax (exhaustive)."""
    H = code.H
    n = code.n
    if _weight_enum_cost(n, wmax) > ENUM_BUDGET:
        raise BudgetError(f"weight enumeration up to {wmax} over {n} bits too large")
    cols = [H[:, j] for j in range(n)]
    mins = np.zeros(wmax + 1, dtype=np.int64)
    for w in range(1, wmax + 1):
        best = None
        for combo in itertools.combinations(range(n), w):
            s = cols[combo[0]].copy()
            for j in combo[1:]:
                s ^= cols[j]
            sw = int(s.sum())
            if best is None or sw < best:
                best = sw
                if best == 0:
                    break
        mins[w] = best
    return ConfinementProfile(wmax=wmax, min_syndrome=mins)


def find_extended_excitation(code: TannerCode, smax: int):
    """Witness of extended low-energy excitations.

    For every syndrome with 0 < |s| <= smax, finds the minimum weight of an
    error producing it (exhaustive search by increasing error weight), and
    returns the (syndrome, min_error_weight) pair maximizing that minimum.
    Unreachable syndromes (possible only for redundant codes) are skipped.
    Returns None if no target syndrome is reachable.
    """
    H = code.H
    n, m = code.n, code.m
    targets = set()
    for w in range(1, smax + 1):
        for combo in itertools.combinations(range(m), w):
            s = np.zeros(m, dtype=np.uint8)
            s[list(combo)] = 1
            if f2.solve(H, s) is not None:
                targets.add(s.tobytes())
    if not targets:
        return None
    found: dict[bytes, int] = {}
    cols = [H[:, j] for j in range(n)]
    spent = 0
    for w in range(1, n + 1):
        spent += math.comb(n, w)
        if spent > ENUM_BUDGET:
            raise BudgetError("coset search budget exhausted before all syndromes were found")
        for combo in itertools.combinations(range(n), w):
            s = cols[combo[0]].copy()
            for j in combo[1:]:
                s ^= cols[j]
            key = s.tobytes()
            if key in targets and key not in found:
                found[key] = w
        if len(found) == len(targets):
            break
    key, weight = max(found.items(), key=lambda kv: (kv[1], kv[0]))
    return np.frombuffer(key, dtype=np.uint8).copy(), weight


def save_code(code: TannerCode, basepath: str) -> None:
    """Write <basepath>.alist plus a JSON sidecar with ensemble metadata."""
    io_alist.write_alist(code.H, basepath + ".alist")
    meta = {"delta_B": code.delta_B, "delta_C": code.delta_C,
            "seed": code.seed, "k": code.k}
    with open(basepath + ".json", "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")


def load_code(basepath: str) -> TannerCode:
    H = io_alist.read_alist(basepath + ".alist")
    with open(basepath + ".json") as fh:
        meta = json.load(fh)
    return TannerCode(H=H, delta_B=meta["delta_B"], delta_C=meta["delta_C"],
                      seed=meta.get("seed"))

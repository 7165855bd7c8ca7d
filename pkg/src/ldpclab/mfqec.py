"""Measurement-free update circuits: sorting networks and rotation angles.

The syndrome information that drives a local update is the count of
violated checks around a site.  A comparator (sorting) network computes
the order statistics of the incident check bits; a short ladder of
conditional rotations then realizes the flip probability as a function of
that count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GATES_PER_COMPARATOR = 8

# Best known (depth, comparator count) for small sorting networks.
OPTIMAL_SORT_COST = {
    3: (3, 3), 4: (3, 5), 5: (5, 9), 6: (5, 12), 7: (6, 16), 8: (6, 19),
    9: (7, 25), 10: (7, 29), 11: (8, 35), 12: (8, 39),
}


@dataclass(frozen=True)
class ComparatorNetwork:
    n: int
    comparators: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.comparators)

    @property
    def depth(self) -> int:
        level = [0] * self.n
        for a, b in self.comparators:
            d = max(level[a], level[b]) + 1
            level[a] = level[b] = d
        return max(level, default=0)

    @property
    def gate_count(self) -> int:
        return GATES_PER_COMPARATOR * self.size

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Sort rows of x ascending (columns are wires)."""
        y = np.atleast_2d(np.asarray(x)).copy()
        for a, b in self.comparators:
            lo = np.minimum(y[:, a], y[:, b])
            hi = np.maximum(y[:, a], y[:, b])
            y[:, a] = lo
            y[:, b] = hi
        return y


def batcher_network(n: int) -> ComparatorNetwork:
    """Batcher odd-even mergesort network on n wires."""
    if n < 1:
        raise ValueError("need n >= 1")
    comps: list[tuple[int, int]] = []
    p = 1
    while p < n:
        k = p
        while k >= 1:
            for j in range(k % p, n - k, 2 * k):
                for i in range(min(k, n - j - k)):
                    if (i + j) // (2 * p) == (i + j + k) // (2 * p):
                        comps.append((i + j, i + j + k))
            k //= 2
        p *= 2
    return ComparatorNetwork(n=n, comparators=tuple(comps))


def verify_sorting(net: ComparatorNetwork) -> bool:
    """Zero-one principle: a network sorts iff it sorts every 0/1 input."""
    n = net.n
    if n > 20:
        raise ValueError("exhaustive 0/1 check limited to n <= 20")
    states = np.arange(1 << n, dtype=np.uint64)
    X = ((states[:, None] >> np.arange(n, dtype=np.uint64)) & 1).astype(np.uint8)
    Y = net.apply(X)
    return bool((np.diff(Y.astype(np.int8), axis=1) >= 0).all())


@dataclass(frozen=True)
class AngleSchedule:
    """Rotation ladder realizing a flip probability per violated-check count.

    The ladder applies rotation theta_j conditioned on the j-th order
    statistic of the incident check bits; the total rotation seen by a
    site whose sorted check vector has a given prefix is a partial sum of
    the theta ladder, so the flip probabilities are sin^2 of the partial
    sums S.
    """

    kind: str
    beta: float
    delta_C: int
    S: np.ndarray      # partial sums, S[0] .. S[len(S)-1]
    theta: np.ndarray  # theta[j] = S[j] - S[j+1]
    gamma: float | None = None

    def flip_probability(self, violated: int) -> float:
        v = int(violated)
        if not 0 <= v <= self.delta_C:
            raise ValueError(f"violated count {v} out of range")
        if self.kind == "metropolis":
            return float(np.sin(self.S[self.delta_C - v]) ** 2)
        return float(np.sin(self.S[v]) ** 2)


def metropolis_angles(beta: float, delta_C: int) -> AngleSchedule:
    """Ladder whose flip probability equals Metropolis acceptance.

    sin(S_j) = e^{beta * min(0, delta_C - 2j)} for j = 1..delta_C, with
    S_0 = pi/2 and S_{delta_C+1} = 0; a site with v violated checks sees
    total rotation S_{delta_C - v}, giving flip probability
    min(1, e^{-2 beta (delta_C - 2v)}).
    """
    if delta_C < 1:
        raise ValueError("need delta_C >= 1")
    S = np.zeros(delta_C + 2)
    S[0] = math.pi / 2
    for j in range(1, delta_C + 1):
        S[j] = math.asin(math.exp(beta * min(0, delta_C - 2 * j)))
    theta = S[:-1] - S[1:]
    return AngleSchedule(kind="metropolis", beta=beta, delta_C=delta_C,
                         S=S, theta=theta)


def error_adapted_angles(beta: float, delta_C: int,
                         gamma: float) -> AngleSchedule:
    """Ladder with flip probabilities rescaled by a target error rate.

    sin^2(S_j) = (e^{2 beta min(2j, delta_C)} - 1) * gamma, which keeps
    the stationary error density near gamma while preserving the
    Boltzmann ratios between flip rates.  The partial sums increase with
    j here, so individual theta_j may be negative.  Requires
    (e^{2 beta delta_C} - 1) * gamma <= 1.
    """
    if delta_C < 1:
        raise ValueError("need delta_C >= 1")
    top = (math.exp(2.0 * beta * delta_C) - 1.0) * gamma
    if top > 1.0:
        raise ValueError(f"(e^(2 beta delta_C) - 1) * gamma = {top:.3g} > 1")
    S = np.zeros(delta_C + 1)
    for j in range(delta_C + 1):
        S[j] = math.asin(math.sqrt(
            (math.exp(2.0 * beta * min(2 * j, delta_C)) - 1.0) * gamma))
    theta = S[:-1] - S[1:]
    return AngleSchedule(kind="error_adapted", beta=beta, delta_C=delta_C,
                         S=S, theta=theta, gamma=gamma)


def angle_sum_gap(sched: AngleSchedule) -> float:
    """|sum_j theta_j - (S_0 - S_last)|; zero up to roundoff by telescoping."""
    return abs(float(sched.theta.sum()) - float(sched.S[0] - sched.S[-1]))


def metropolis_acceptance(beta: float, delta_C: int, violated: int) -> float:
    """min(1, e^{-2 beta (delta_C - 2v)}): the target the ladder must hit."""
    dE = 2.0 * (delta_C - 2 * violated)
    return min(1.0, math.exp(-beta * dE))

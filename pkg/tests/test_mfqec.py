import math

import numpy as np
import pytest

from ldpclab import mfqec


def test_batcher_8_cost():
    net = mfqec.batcher_network(8)
    assert net.size == 19
    assert net.depth == 6
    assert net.gate_count == 152


def test_batcher_4_cost():
    net = mfqec.batcher_network(4)
    assert net.size == 5
    assert net.depth == 3


def test_zero_one_verification_range():
    for n in range(2, 13):
        assert mfqec.verify_sorting(mfqec.batcher_network(n))


def test_broken_network_detected():
    net = mfqec.ComparatorNetwork(n=3, comparators=((0, 1),))
    assert not mfqec.verify_sorting(net)


def test_apply_sorts_integers():
    net = mfqec.batcher_network(6)
    gen = np.random.default_rng(0)
    x = gen.integers(0, 100, size=(50, 6))
    y = net.apply(x)
    assert np.array_equal(y, np.sort(x, axis=1))


def test_batcher_at_or_near_optimal():
    for n, (depth, size) in mfqec.OPTIMAL_SORT_COST.items():
        net = mfqec.batcher_network(n)
        assert net.size >= size
        assert net.depth >= depth


def test_metropolis_angles_match_acceptance():
    for beta in (0.1, 0.5, 1.0, 2.0, 5.0):
        for dc in range(3, 16):
            sched = mfqec.metropolis_angles(beta, dc)
            for v in range(dc + 1):
                assert sched.flip_probability(v) == pytest.approx(
                    mfqec.metropolis_acceptance(beta, dc, v), abs=1e-12)
            assert mfqec.angle_sum_gap(sched) <= 1e-12


def test_metropolis_angles_boundaries():
    sched = mfqec.metropolis_angles(1.0, 4)
    assert sched.flip_probability(4) == pytest.approx(1.0)
    assert sched.flip_probability(0) == pytest.approx(math.exp(-8.0), rel=1e-12)
    with pytest.raises(ValueError):
        sched.flip_probability(5)


def test_error_adapted_example():
    sched = mfqec.error_adapted_angles(0.5, 4, 0.01)
    assert sched.flip_probability(1) == pytest.approx(
        (math.exp(1.0) ** 2 - 1.0) * 0.01, rel=1e-12)
    assert sched.flip_probability(0) == pytest.approx(0.0, abs=1e-15)
    # Partial sums increase with j, so steps may be negative.
    assert (np.diff(sched.S) >= 0).all()
    assert mfqec.angle_sum_gap(sched) <= 1e-12


def test_error_adapted_precondition():
    with pytest.raises(ValueError):
        mfqec.error_adapted_angles(2.0, 10, 0.5)

import numpy as np
import pytest

from ldpclab import codes, decoders, f2, hgp
from ldpclab.decoders import Verdict


def test_bit_flip_single_error():
    c = codes.sample_regular_code(20, 5, 10, seed=0)
    e = np.zeros(c.n, dtype=np.uint8)
    e[3] = 1
    res = decoders.bit_flip(c.H, f2.matvec(c.H, e))
    assert res.converged and res.iterations == 1
    assert np.array_equal(res.correction, e)


def test_bit_flip_zero_syndrome():
    c = codes.sample_regular_code(20, 3, 4, seed=0)
    res = decoders.bit_flip(c.H, np.zeros(c.m, dtype=np.uint8))
    assert res.converged and not res.correction.any()


def test_bp_single_errors():
    c = codes.sample_regular_code(20, 3, 5, seed=3)
    bp = decoders.MinSumBP([np.nonzero(r)[0] for r in c.H], c.n)
    for j in range(c.n):
        e = np.zeros(c.n, dtype=np.uint8)
        e[j] = 1
        res = bp.decode(f2.matvec(c.H, e), iters=10)
        assert res.converged
        assert np.array_equal(f2.matvec(c.H, res.correction),
                              f2.matvec(c.H, e))


def test_bp_exact_on_trees():
    # Min-sum is exact block-ML on cycle-free graphs; check against
    # brute force whenever the minimum-weight coset element is unique.
    gen = np.random.default_rng(0)
    for _ in range(40):
        n = 9
        H = np.zeros((n - 1, n), dtype=np.uint8)
        for child in range(1, n):
            H[child - 1, child] = 1
            H[child - 1, gen.integers(child)] = 1
        e = (gen.random(n) < 0.2).astype(np.uint8)
        s = f2.matvec(H, e)
        weights = [int(v.sum()) for idx in range(1 << n)
                   if np.array_equal(f2.matvec(H, (v := np.array(
                       [(idx >> b) & 1 for b in range(n)], dtype=np.uint8))), s)]
        best = min(weights)
        if weights.count(best) != 1:
            continue
        bp = decoders.MinSumBP([np.nonzero(r)[0] for r in H], n, p=0.2)
        res = bp.decode(s, iters=20)
        assert res.converged and int(res.correction.sum()) == best


def test_osd_always_satisfies_syndrome():
    c = codes.sample_regular_code(20, 3, 4, seed=1)
    gen = np.random.default_rng(5)
    for _ in range(50):
        e = (gen.random(c.n) < 0.25).astype(np.uint8)
        s = f2.matvec(c.H, e)
        llr = gen.normal(size=c.n)
        x = decoders.osd0(c.H, s, llr)
        assert x is not None
        assert np.array_equal(f2.matvec(c.H, x), s)


def test_osd_prefers_unreliable_columns():
    # With one column marked certainly-in-error, a weight-1 syndrome
    # resolves onto exactly that column.
    c = codes.sample_regular_code(16, 3, 4, seed=2)
    e = np.zeros(c.n, dtype=np.uint8)
    e[7] = 1
    llr = np.full(c.n, 5.0)
    llr[7] = -5.0
    x = decoders.osd0(c.H, f2.matvec(c.H, e), llr)
    assert np.array_equal(x, e)


def test_osd_unreachable_syndrome():
    H = np.array([[1, 1, 0], [1, 1, 0]], dtype=np.uint8)
    assert decoders.osd0(H, np.array([1, 0], np.uint8), np.zeros(3)) is None


def test_bp_osd_pipeline_syndrome_contract():
    c = codes.sample_regular_code(25, 4, 5, seed=7)
    rows = [np.nonzero(r)[0] for r in c.H]
    gen = np.random.default_rng(9)
    for _ in range(50):
        e = (gen.random(c.n) < 0.2).astype(np.uint8)
        s = f2.matvec(c.H, e)
        res = decoders.decode_bp_osd(rows, c.n, s)
        assert res.converged
        assert np.array_equal(f2.matvec(c.H, res.correction), s)


def test_verdict_classical():
    H = np.array([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]], dtype=np.uint8)
    e = np.array([1, 0, 0, 0], dtype=np.uint8)
    assert decoders.verdict_classical(H, e, e) is Verdict.SUCCESS
    cw = np.ones(4, dtype=np.uint8)
    assert decoders.verdict_classical(H, e, e ^ cw) is Verdict.LOGICAL_FAILURE
    bad = np.array([0, 1, 0, 0], dtype=np.uint8)
    assert decoders.verdict_classical(H, e, e ^ bad) is Verdict.DECODE_FAILURE


def test_verdict_css_stabilizer_is_success():
    css = hgp.toric_code(3)
    e = np.zeros(css.N, dtype=np.uint8)
    stab = e.copy()
    stab[css.hx_rows[0]] = 1
    assert decoders.verdict_css(css, e, stab, "X") is Verdict.SUCCESS
    # An X-logical: kernel of H_Z outside rowspace(H_X).
    for v in f2.nullspace_basis(css.H_Z):
        if not css.x_stabilizers.contains(v):
            assert decoders.verdict_css(css, e, v, "X") is Verdict.LOGICAL_FAILURE
            break
    else:
        pytest.fail("no logical found")
    bad = np.zeros(css.N, dtype=np.uint8)
    bad[0] = 1
    assert decoders.verdict_css(css, e, bad, "X") is Verdict.DECODE_FAILURE


def test_block_exact_completion_tree_product():
    css = hgp.tree_hgp(2, 2)
    gen = np.random.default_rng(3)
    for t in range(20):
        e = (gen.random(css.N) < 0.03).astype(np.uint8)
        s = np.zeros(css.M_Z, dtype=np.uint8)
        for i, supp in enumerate(css.hz_rows):
            s[i] = int(e[supp].sum()) & 1
        res = decoders.decode_bp_block_exact(css, s, "X")
        assert res.converged
        out = np.zeros(css.M_Z, dtype=np.uint8)
        for i, supp in enumerate(css.hz_rows):
            out[i] = int(res.correction[supp].sum()) & 1
        assert np.array_equal(out, s)

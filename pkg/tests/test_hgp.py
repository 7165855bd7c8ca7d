import numpy as np
import pytest

from ldpclab import codes, f2, hgp


def test_product_shapes_and_orthogonality():
    c1 = codes.sample_regular_code(12, 3, 4, seed=0)
    c2 = codes.sample_regular_code(8, 3, 4, seed=1)
    css = hgp.hypergraph_product(c1.H, c2.H)
    assert css.N == 12 * 8 + 9 * 6
    assert css.M_X == 9 * 8 and css.M_Z == 12 * 6
    HX, HZ = css.H_X, css.H_Z
    assert not f2.matmul(HX, HZ.T).any()


def test_product_k_formula_nonredundant():
    c = next(c for s in range(20)
             if (c := codes.sample_regular_code(12, 3, 4, seed=s)).redundancy == 0)
    css = hgp.hypergraph_product(c.H, c.H)
    assert css.K == c.k ** 2
    assert css.M_X == css.M_Z == c.n * (c.n - c.k)


def test_five_qubit_product():
    H = np.array([[1, 1]], dtype=np.uint8)
    css = hgp.hypergraph_product(H, H)
    assert (css.N, css.K) == (5, 1)
    assert hgp.css_distance_bruteforce(css) == 2


def test_orthogonality_guard():
    hx = [np.array([0, 1], dtype=np.int32)]
    hz = [np.array([1, 2], dtype=np.int32)]
    with pytest.raises(ValueError):
        hgp.CssCode(hx_rows=hx, hz_rows=hz, N=3, block1=3, provenance={})


def test_toric_parameters():
    for L in (3, 4, 5):
        t = hgp.toric_code(L)
        assert t.N == 2 * L * L
        assert t.K == 2
    assert hgp.css_distance_bruteforce(hgp.toric_code(3)) == 3
    with pytest.raises(ValueError):
        hgp.toric_code(2)


def test_tree_code_structure():
    t = hgp.tree_code(2)
    assert t.n == 13 and t.m == 12
    assert (t.H.sum(axis=1) == 2).all()
    assert f2.rank(t.H) == t.m  # spanning tree: independent checks, k = 1
    lo, hi = t.leaf_range()
    assert hi - lo == 9


def test_tree_hgp_parameters():
    css = hgp.tree_hgp(2, 2)
    n = 13
    assert css.N == n * n + (n - 1) * (n - 1)
    assert css.K == 1


def test_dense_view_matches_rows():
    css = hgp.toric_code(3)
    HX = css.H_X
    for i, supp in enumerate(css.hx_rows):
        assert sorted(np.nonzero(HX[i])[0]) == sorted(supp)


def test_reduced_weight_stabilizer_orbit():
    css = hgp.hypergraph_product(np.array([[1, 1]], dtype=np.uint8),
                                 np.array([[1, 1]], dtype=np.uint8))
    # A stabilizer itself reduces to weight 0.
    stab = np.zeros(css.N, dtype=np.uint8)
    stab[css.hx_rows[0]] = 1
    assert hgp.reduced_weight(css, stab, "X") == 0


def test_save_load_css(tmp_path):
    css = hgp.toric_code(3)
    base = str(tmp_path / "toric3")
    hgp.save_css(css, base)
    back = hgp.load_css(base)
    assert back.N == css.N and back.K == css.K
    assert np.array_equal(back.H_X, css.H_X)
    assert np.array_equal(back.H_Z, css.H_Z)

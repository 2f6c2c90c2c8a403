import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from a1kit import gf2, naive
from a1kit.gf2 import GF2Matrix, ShapeError, Subspace


def M(rows):
    return GF2Matrix.from_dense(np.array(rows, dtype=np.uint8))


def bitmats(max_rows=40, max_cols=90):
    shapes = st.tuples(st.integers(0, max_rows), st.integers(0, max_cols))
    return shapes.flatmap(lambda s: arrays(np.uint8, s, elements=st.integers(0, 1)))


def test_rank_examples():
    assert gf2.rank(M([[1, 0], [1, 1]])) == 2
    assert gf2.rank(M([[1, 1], [1, 1]])) == 1
    assert gf2.rank(M([[0]])) == 0


def test_kernel_examples():
    assert M([[1, 1]]).shape == (1, 2)
    k = gf2.kernel(M([[1, 1]]))
    assert k == Subspace.span(M([[1, 1]]))
    assert gf2.kernel(GF2Matrix.identity(5)).dim == 0
    assert gf2.kernel(GF2Matrix.zeros(2, 3)).dim == 3


def test_image_preimage_quotient():
    assert gf2.image(GF2Matrix.identity(4)) == Subspace.full(4)
    assert gf2.preimage(GF2Matrix.zeros(3, 2), np.array([1, 0, 0], dtype=np.uint8)) is None
    q = gf2.quotient_basis(Subspace.span(M([[1, 0]])))
    assert [list(v) for v in q] == [[0, 1]]


def test_wide_matrices_cross_word_boundaries():
    rng = np.random.default_rng(1)
    a = (rng.random((70, 150)) < 0.3).astype(np.uint8)
    b = (rng.random((150, 130)) < 0.3).astype(np.uint8)
    assert np.array_equal((M(a) @ M(b)).to_dense(), naive.matmul(a, b))
    assert np.array_equal(M(a).T.to_dense(), a.T)


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        GF2Matrix.zeros(2, 3) @ GF2Matrix.zeros(2, 3)


def test_from_coo_xors_duplicates():
    m = GF2Matrix.from_coo(2, 2, [0, 0, 1], [1, 1, 0])
    assert m.to_dense().tolist() == [[0, 0], [1, 0]]


def test_vstack_and_block_diag():
    a, b = M([[1, 0]]), M([[0, 1], [1, 1]])
    assert gf2.vstack([a, b]).to_dense().tolist() == [[1, 0], [0, 1], [1, 1]]
    d = gf2.block_diag([a, b]).to_dense()
    assert d.shape == (3, 4) and d[0, :2].tolist() == [1, 0] and d[1:, 2:].tolist() == [[0, 1], [1, 1]]


@settings(max_examples=150, deadline=None)
@given(bitmats())
def test_rref_matches_naive(a):
    r, piv = gf2.rref(GF2Matrix.from_dense(a))
    nr, npiv = naive.rref(a)
    assert list(piv) == list(npiv)
    assert np.array_equal(r.to_dense(), nr)


@settings(max_examples=150, deadline=None)
@given(bitmats())
def test_rank_nullity(a):
    m = GF2Matrix.from_dense(a)
    k = gf2.kernel(m)
    assert gf2.rank(m) + k.dim == a.shape[1]
    if k.dim:
        assert (m @ k.basis.T).is_zero()


@settings(max_examples=100, deadline=None)
@given(bitmats(30, 30), st.integers(0, 2**31))
def test_preimage_solves(a, seed):
    m = GF2Matrix.from_dense(a)
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 2, a.shape[1]).astype(np.uint8)
    v = naive.matmul(a, x.reshape(-1, 1)).ravel() if a.size else np.zeros(a.shape[0], np.uint8)
    y = gf2.preimage(m, v)
    assert y is not None
    assert np.array_equal(naive.matmul(a, np.asarray(y).reshape(-1, 1)).ravel() if a.size else v, v)


@settings(max_examples=100, deadline=None)
@given(bitmats(20, 40), bitmats(20, 40))
def test_subspace_sum_contains_both(a, b):
    if a.shape[1] != b.shape[1]:
        b = np.zeros((b.shape[0], a.shape[1]), np.uint8)
    sa, sb = Subspace.span(GF2Matrix.from_dense(a)), Subspace.span(GF2Matrix.from_dense(b))
    s = sa + sb
    assert s.contains(sa) and s.contains(sb)
    expected = naive.rank(np.vstack([a, b])) if a.shape[1] else 0
    assert s.dim == expected


def test_random_matrices_against_naive():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        rows, cols = rng.integers(0, 201, 2)
        a = (rng.random((rows, cols)) < rng.choice([0.02, 0.1, 0.5])).astype(np.uint8)
        m = GF2Matrix.from_dense(a)
        r, piv = gf2.rref(m)
        nr, npiv = naive.rref(a)
        assert list(piv) == list(npiv)
        assert np.array_equal(r.to_dense(), nr)
        k = gf2.kernel(m)
        fast = naive.rref(k.basis.to_dense())[0] if k.dim else np.zeros((0, cols), np.uint8)
        assert np.array_equal(fast, naive.kernel(a))

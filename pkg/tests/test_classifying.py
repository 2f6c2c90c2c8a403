import numpy as np
import pytest

from a1kit.a1mod import margolis, stable_equal, suspend
from a1kit.classifying import (
    build_P,
    build_P0,
    build_Pn,
    build_R,
    bv_cohomology,
    check_nonsplit,
    exponent_vectors,
    kunneth_check,
)
from a1kit.reference import NaiveBV
from a1kit.steenrod import build_joker
from a1kit.a1mod import tensor


def test_bv_dims():
    assert [bv_cohomology(1, 12).dim(d) for d in range(1, 13)] == [1] * 12
    assert [bv_cohomology(2, 12).dim(d) for d in range(1, 13)] == [d + 1 for d in range(1, 13)]
    assert len(exponent_vectors(3, 4)) == 15


def test_cartan_sq1():
    bv = bv_cohomology(2, 6)
    img = bv.module.sq(1, 2).apply(bv.vector([1, 1]))
    assert np.array_equal(img, bv.vector([2, 1]) ^ bv.vector([1, 2]))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_bv_matches_naive_action(r):
    N = 12
    fast = bv_cohomology(r, N)
    slow = NaiveBV(r, N)
    for d in range(1, N - 1):
        for i in (1, 2):
            # both order monomials by descending exponent vector
            assert [tuple(e) for e in fast.exponents[d]] == slow.basis[d]
            assert np.array_equal(fast.module.sq(i, d).to_dense(), slow.sq(i, d))


def test_acyclicity_of_stunted_modules():
    assert margolis(build_R(40).module, "Q1").vanishes()
    assert margolis(build_P(40).module, "Q0").vanishes()
    assert margolis(build_P0(40).module, "Q0").vanishes()


def test_R_and_P0_are_nonsplit():
    assert check_nonsplit() == {"R": True, "P0": True}


def test_P1_is_P():
    assert stable_equal(build_Pn(1, 30).module, build_P(30).module).equal


def test_P4_periodicity():
    assert stable_equal(build_Pn(4, 40).module, suspend(build_Pn(0, 40).module, 8)).equal


def test_P0_tensor_joker():
    N = 40
    v = stable_equal(tensor(build_P0(N).module, build_joker().module), suspend(build_Pn(2, N).module, -4))
    assert v.equal


@pytest.mark.parametrize("r", [1, 2, 3])
def test_kunneth(r):
    assert kunneth_check(r, 20).ok


def test_negative_n_rejected():
    with pytest.raises(ValueError):
        build_Pn(-1, 10)

from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from a1kit.grothendieck import (
    DecompositionError,
    DimSequence,
    GrothendieckClass,
    dim_pbarF_power,
    dim_pIbar,
    figure2_class,
    figure2_dims,
    len_pbarZ_quotient,
    newton_decompose,
)


def test_single_exterior_power():
    assert newton_decompose([comb(r, 2) for r in range(7)]).as_dict() == {2: 1}


def test_augmentation_ideal():
    R = 6
    assert newton_decompose([2**r - 1 for r in range(R + 1)]).as_dict() == {i: 1 for i in range(1, R + 1)}


def test_multiplicity_needs_generalized_mode():
    s = [2 * r for r in range(6)]
    with pytest.raises(DecompositionError):
        newton_decompose(s)
    assert newton_decompose(s, generalized=True).as_dict() == {1: 2}


def test_triangular_numbers_are_multiplicity_free():
    # C(r+1, 2) = C(r, 1) + C(r, 2)
    assert newton_decompose([comb(r + 1, 2) for r in range(6)]).as_dict() == {1: 1, 2: 1}


def test_rejects_unreduced_and_negative():
    with pytest.raises(DecompositionError):
        newton_decompose([1, 2, 4])
    with pytest.raises(DecompositionError):
        newton_decompose([0, 1, 1])


def test_calculators():
    assert dim_pIbar(4, 2) == 3
    assert dim_pbarF_power(2, 3) == 4
    assert all(len_pbarZ_quotient(0, r) == 0 for r in range(5))


def test_figure2_examples():
    assert figure2_dims(0, 8, 2) == 3
    assert figure2_dims(2, 6, 4) == comb(4, 4)
    assert figure2_dims(0, 1, 5) == 0


def test_figure2_class_and_dims_agree():
    for n in range(-4, 5):
        for d in range(-8, 25):
            cls = figure2_class(n, d)
            for r in range(1, 6):
                assert cls.dim(r) == figure2_dims(n, d, r)


@given(st.integers(-6, 6), st.integers(-16, 40))
def test_bott_periodicity(n, d):
    assert figure2_class(n, d) == figure2_class(n + 4, d - 8)


@given(st.dictionaries(st.integers(1, 6), st.integers(1, 3), max_size=4))
def test_round_trip(mults):
    cls = GrothendieckClass.of(mults)
    seq = DimSequence.from_function(cls.dim, 7)
    assert newton_decompose(seq, generalized=True) == cls


def test_class_order_and_str():
    a = GrothendieckClass.of({1: 1})
    b = GrothendieckClass.of({1: 1, 2: 1})
    assert a <= b and not b <= a
    assert str(b) == "Λ^1 + Λ^2"
    assert str(GrothendieckClass.of({})) == "0"

import pytest

from a1kit.steenrod import (
    TOP,
    adem_product,
    build_a1,
    build_a1_mod_a0,
    build_a1_module,
    build_joker,
    check_confluence,
    reduce_word,
)


def test_a1_dimensions():
    a1 = build_a1()
    assert a1.dim == 8
    assert a1.dims_by_degree() == [1, 1, 1, 2, 1, 1, 1]
    assert a1.top() == TOP


def test_products():
    a1 = build_a1()
    assert a1.multiply((2,), (2,)) == (1, 2, 1)
    assert a1.multiply((1,), TOP) is None
    assert reduce_word((1, 1)) is None


def test_presentation_checks():
    check_confluence(7)
    build_a1().check_associative()


def test_adem_basics():
    # Sq1Sq2 = Sq3 and Sq2Sq2 = Sq3Sq1
    assert adem_product((1, 2)) == frozenset([(3,)])
    assert adem_product((2, 2)) == frozenset([(3, 1)])
    assert adem_product((3, 3)) == frozenset([(5, 1)])


def test_products_match_golden(golden):
    a1 = build_a1()
    for row in golden("a1_products.json"):
        p = a1.multiply(tuple(row["a"]), tuple(row["b"]))
        expected = frozenset(tuple(m) for m in row["admissible"])
        assert (frozenset() if p is None else adem_product(p)) == expected


def test_a1_mod_a0():
    m = build_a1_mod_a0().module
    assert m.dims_dict() == {0: 1, 2: 1, 3: 1, 5: 1}
    assert m.sq(1, 0).is_zero()
    # Sq2 on the class of Sq2 lands on Sq1Sq2Sq1, which is in the ideal
    assert m.sq(2, 2).is_zero()
    m.check_relations()


def test_joker():
    j = build_joker().module
    assert j.dims_dict() == {d: 1 for d in range(-2, 3)}
    assert j.sq(2, -2).to_dense().tolist() == [[1]]
    j.check_relations()


def test_a1_as_module():
    m = build_a1_module().module
    assert m.total_dim == 8
    m.check_relations()


@pytest.mark.parametrize("w", [(2, 2, 2), (1, 2, 1, 2, 1), (2, 1, 2, 1, 2)])
def test_long_words_vanish_or_reduce(w):
    nf = reduce_word(w)
    assert nf is None or sum(nf) == sum(w)

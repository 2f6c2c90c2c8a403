import pytest

from a1kit.a1mod import A1Module, free_module, tensor
from a1kit.classifying import build_P, bv_cohomology
from a1kit.gf2 import GF2Matrix
from a1kit.grothendieck import figure2_dims
from a1kit.toda import (
    ComplexError,
    HypothesisError,
    build_complex,
    decalage_check,
    homology,
    offset,
)
from a1kit.steenrod import build_joker


def test_offsets():
    assert [offset(n) for n in range(-4, 5)] == [-8, -7, -6, -4, 0, 1, 2, 4, 8]


def test_index_zero_term_on_P():
    P = build_P(30).module
    c = build_complex(P, (0, 3), (0, 20))
    assert [c.term_dim(0, t) for t in range(1, 9)] == [0, 1, 0, 1, 0, 1, 0, 1]
    # Sq2Sq1Sq2 vanishes on the even powers of u
    for t in range(2, 20, 2):
        assert P.op((2, 1, 2), t).is_zero()


def test_zero_module_gives_zero_complex():
    h = homology(build_complex(A1Module.zero(), (0, 3), (-4, 4)))
    assert not any(h.dims.values())


def test_homology_on_P():
    P = build_P(40).module
    h = homology(build_complex(P, (0, 3), (-4, 24)))
    # u^{4m} at 0, u^{4k+1} at 1, u and u^{4k+2} at 2, u^2 and u^{4k+4} at 3
    bottom = {0: None, 1: None, 2: -1, 3: -2}
    expected = set()
    for n, t, _, rel in h.cells():
        if not rel:
            continue
        first = 4 if n == 0 else 0
        if t == bottom[n] or (t >= first and t % 4 == 0):
            expected.add((n, t))
    assert all(v == 1 for v in h.nonzero().values())
    assert set(h.nonzero()) == expected


@pytest.mark.parametrize("n,t,label", [(0, 4, "u^4"), (1, 0, "u^1"), (2, -1, "u^1"), (3, -2, "u^2")])
def test_representatives_on_P(n, t, label):
    P = build_P(30).module
    c = build_complex(P, (-1, 4), (-4, 10))
    reps = c.representatives(n, t)
    assert len(reps) == 1
    assert P.label(c.m_degree(n, t), 0) == label


def test_bv2_entries():
    m = bv_cohomology(2, 24).module
    h = homology(build_complex(m, (0, 3), (0, 12)))
    assert h.get(0, 8) == 3
    assert h.get(2, 6) == 0


def test_matches_golden_naive(golden):
    data = golden("toda_bv2.json")
    m = bv_cohomology(data["rank"], data["max_degree"]).module
    h = homology(build_complex(m, (-3, 4), (-8, 14)))
    for n, t, v in data["cells"]:
        assert h.is_reliable(n, t)
        assert h.get(n, t) == v, (n, t)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_closed_form(r):
    m = bv_cohomology(r, 30).module
    h = homology(build_complex(m, (-3, 4), (-8, 16)))
    for n, d, v, rel in h.cells():
        if rel:
            assert v == figure2_dims(n, d, r), (n, d)


def test_corrupted_module_raises():
    P = build_P(12).module
    sq2 = list(P.sq2)
    # flip Sq2 on u^2 and u^4 so that Sq2 Sq2 u^2 = u^6
    sq2[2 - P.lo] = sq2[2 - P.lo] + GF2Matrix.identity(1)
    sq2[4 - P.lo] = sq2[4 - P.lo] + GF2Matrix.identity(1)
    bad = A1Module(P.lo, P.hi, P.dims, P.sq1, tuple(sq2), P.reliable_hi)
    with pytest.raises(ComplexError):
        build_complex(bad, (0, 3), (-4, 6))


def test_decalage():
    P = build_P(32).module
    assert decalage_check(P).ok
    assert decalage_check(tensor(P, P)).ok
    v = decalage_check(free_module([0, 2]))
    assert v.ok or v.compared == 0


def test_decalage_requires_q0_acyclic():
    with pytest.raises(HypothesisError):
        decalage_check(build_joker().module)


def test_free_module_is_exact():
    h = homology(build_complex(free_module([0, 1]), (-3, 4)))
    assert not any(h.dims.values())

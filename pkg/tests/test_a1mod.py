import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from a1kit.a1mod import (
    A1Module,
    ModuleRelationError,
    ann_sq1,
    direct_sum,
    free_module,
    margolis,
    min_generators,
    projective_cover,
    split_free,
    stable_equal,
    suspend,
    syzygy,
    tensor,
)
from a1kit.classifying import build_P, build_P0, build_R
from a1kit.gf2 import GF2Matrix
from a1kit.steenrod import build_a1_module, build_joker
from a1kit.verify import module_corpus


@pytest.fixture(scope="module")
def P():
    return build_P(30).module


def test_suspend(P):
    s = suspend(P, 1)
    assert s.lo == 2 and all(s.dim(d) == 1 for d in range(2, 31))
    assert suspend(suspend(P, 3), -3).dims == P.dims
    assert suspend(suspend(P, 3), -3).lo == P.lo


def test_direct_sum_with_zero(P):
    s = direct_sum(P, A1Module.zero())
    assert s.dims_dict() == P.dims_dict()
    assert all(s.sq(1, d) == P.sq(1, d) for d in range(1, 20))


def test_tensor_cartan(P):
    pp = tensor(P, P)
    assert pp.dim(2) == 1
    # degree 4 basis is u^a x u^(4-a) for a = 1, 2, 3; Sq2(u x u) = u^2 x u^2
    assert pp.sq(2, 2).to_dense().ravel().tolist() == [0, 1, 0]


def test_tensor_with_trivial_is_identity(P):
    t = tensor(P, A1Module.trivial())
    assert t.dims_dict() == P.dims_dict()
    assert all(t.sq(i, d) == P.sq(i, d) for i in (1, 2) for d in range(1, 20))


def test_joker_square_splits():
    J = build_joker().module
    s = split_free(tensor(J, J))
    assert s.residual.dims_dict() == {0: 1}
    assert s.free_rank == 3


def test_ann_sq1(P, golden):
    ann = ann_sq1(P)
    assert all(ann[d].dim == (1 if d % 2 == 0 else 0) for d in range(1, 29))
    a1 = build_a1_module().module
    got = {d: s.dim for d, s in ann_sq1(a1).items() if s.dim}
    assert got == {int(k): v for k, v in golden("a1_ann_sq1.json").items()}
    triv = ann_sq1(A1Module.trivial())
    assert triv[0].dim == 1


def test_margolis_acyclicity():
    P = build_P(40).module
    R = build_R(40).module
    assert margolis(P, "Q0").vanishes()
    assert margolis(R, "Q1").vanishes()
    F = free_module([0, 3])
    assert margolis(F, "Q0").vanishes() and margolis(F, "Q1").vanishes()


def test_q1_on_R():
    R = build_R(20).module
    # Q1 x = u^2
    assert R.q1(-1).to_dense().tolist() == [[1]]


def test_min_generators(P):
    assert [d for d, _ in min_generators(build_a1_module().module)] == [0]
    degs = [d for d, _ in min_generators(P)]
    assert 1 in degs and 3 in degs
    assert [d for d, _ in min_generators(A1Module.trivial())] == [0]


def test_syzygy():
    assert syzygy(free_module([0])).total_dim == 0
    omega = syzygy(A1Module.trivial())
    assert [omega.dim(d) for d in range(0, 7)] == [0, 1, 1, 2, 1, 1, 1]


def test_desuspended_syzygy_of_P0_is_P():
    P0 = build_P0(30).module
    v = stable_equal(suspend(syzygy(P0), -1), build_P(30).module)
    assert v.equal


def test_projective_cover_is_surjective(P):
    F, pi = projective_cover(P)
    pi.check(P.hi - 2)
    for d in range(1, P.hi - 6):
        assert pi.at(d).rank() == P.dim(d)


def test_split_free_examples(P):
    s = split_free(build_a1_module().module)
    assert s.free_part_dims == {0: 1}
    assert s.residual.total_dim == 0
    pp = split_free(tensor(P, P))
    target = suspend(syzygy(P), -1)
    top = int(min(pp.residual.rel_bound(), target.rel_bound()))
    assert all(pp.residual.dim(d) == target.dim(d) for d in range(0, top + 1))


def test_stable_equal_examples(P):
    assert stable_equal(P, direct_sum(P, free_module([2, 5], P.hi))).equal
    v = stable_equal(P, suspend(P, 1))
    assert v.status == "NOT-EQUAL" and v.witness == 1


def test_check_relations_rejects_bad_action():
    m = A1Module.from_dense(0, [1, 1, 1], [[1], [1]], [[0]])
    with pytest.raises(ModuleRelationError):
        m.check_relations()


def test_json_round_trip():
    for name, m in module_corpus(16).items():
        back = A1Module.from_json(m.to_json())
        assert back.dims == m.dims and back.lo == m.lo, name
        assert all(x == y for x, y in zip(back.sq1, m.sq1))
        assert all(x == y for x, y in zip(back.sq2, m.sq2))


def test_corpus_satisfies_relations():
    for name, m in module_corpus(24).items():
        assert m.is_valid(), name


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 4), min_size=1, max_size=3), st.integers(-4, 4))
def test_free_modules_are_stably_zero(gens, k):
    P = build_P(24).module
    F = free_module(sorted(gens), 30)
    s = split_free(direct_sum(suspend(P, k), F))
    assert s.free_rank >= len(gens)
    assert margolis(F, "Q0").vanishes()


@settings(max_examples=20, deadline=None)
@given(st.integers(-5, 5))
def test_suspension_commutes_with_margolis(k):
    P0 = build_P0(20).module
    a = margolis(P0, "Q1").reliable_dims()
    b = margolis(suspend(P0, k), "Q1").reliable_dims()
    assert {d + k: v for d, v in a.items()} == b


def test_gf2_matrix_types(P):
    assert isinstance(P.sq(1, 3), GF2Matrix)
    assert P.sq(1, 1).to_dense().tolist() == [[1]]
    assert P.sq(1, 2).to_dense().tolist() == [[0]]

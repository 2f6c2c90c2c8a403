"""Fast path against golden values produced by the slow reference path."""

import pytest

from a1kit import reference
from a1kit.a1mod import margolis
from a1kit.classifying import bv_cohomology


def test_margolis_of_bv_against_golden(golden):
    for row in golden("bv_small.json"):
        m = bv_cohomology(row["rank"], row["max_degree"]).module
        assert [m.dim(d) for d in range(1, row["max_degree"] + 1)] == row["dims"]
        for q, cells in row["margolis"].items():
            h = margolis(m, q)
            for d, v in cells:
                if d in h.reliable_dims():
                    assert h.dims[d] == v, (row["rank"], q, d)


def test_rank_two_splits_as_two_P_plus_P_tensor_P(golden):
    from a1kit.a1mod import tensor
    from a1kit.classifying import build_P

    row = golden("bv_small.json")[1]
    P = build_P(20).module
    pp = tensor(P, P)
    for q, cells in row["margolis"].items():
        hp = margolis(P, q).reliable_dims()
        hpp = margolis(pp, q).reliable_dims()
        for d, v in cells:
            if d in hpp and d in hp:
                assert 2 * hp[d] + hpp[d] == v


@pytest.mark.parametrize("name", ["a1_products.json", "a1_ann_sq1.json", "bv_small.json", "toda_bv2.json"])
def test_golden_files_parse(golden, name):
    assert golden(name)


def test_reference_reproduces_a_golden_slice(golden):
    row = golden("bv_small.json")[1]
    m = reference.NaiveBV(2, 12)
    assert [[d, v] for d, v in sorted(reference.tu_dims(m).items())] == row["tu"][:12]

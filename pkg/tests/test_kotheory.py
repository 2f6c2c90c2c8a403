import json
from math import comb

import pytest

from a1kit.gf2 import GF2Matrix
from a1kit.grothendieck import dim_pbarF_power
from a1kit.kotheory import (
    ExactCoupleData,
    corrupt_delta,
    detection_check,
    dims_accounting,
    exact_couple_check,
    ko_total,
    qo_quotient,
    qo_table,
    ses_report,
    sq2_homology,
    sq2_homology_expected,
    st_space,
    st_tu_couple,
    stability_violations,
    tables_json,
    theta_image,
    tu_space,
)
from a1kit.toda import offset


def test_tu_vanishes_for_rank_one():
    t = tu_space(1, 30)
    assert all(t.dim(d) == 0 for d in t.degrees())
    assert not any(sq2_homology(t).values())


def test_tu_low_degrees():
    t = tu_space(3, 16)
    assert all(t.dim(d) == 0 for d in range(1, 5))


def test_tu_against_golden(golden):
    for row in golden("bv_small.json"):
        t = tu_space(row["rank"], row["max_degree"])
        assert [[d, t.dim(d)] for d in t.degrees()] == row["tu"]
        assert [[d, v] for d, v in sorted(sq2_homology(t).items())] == row["sq2_homology"]


def test_sq2_homology_examples():
    h2 = sq2_homology(tu_space(2, 20))
    assert {d: v for d, v in h2.items() if v} == {6: 1}
    h3 = sq2_homology(tu_space(3, 20))
    assert (h3[6], h3[7], h3[14], h3[15]) == (3, 1, 0, 0)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_sq2_homology_closed_form(r):
    h = sq2_homology(tu_space(r, 26))
    assert all(h[d] == sq2_homology_expected(d, r) for d in h)


def test_st_space():
    st = st_space(tu_space(2, 20))
    assert all(st[d].dim == 0 for d in range(1, 7))
    assert all(s.dim == 0 for s in st_space(tu_space(1, 20)).values())


@pytest.mark.parametrize("r", [1, 2, 3])
def test_accounting_and_stability(r):
    for d, tu, st, st2, h in dims_accounting(r, 24):
        assert tu == st + st2 + h
    assert stability_violations(r, 24) == []


def test_theta_images():
    # Sq2 u^d = C(d, 2) u^{d+2}
    for d in range(1, 20):
        assert theta_image(2, d, 1) == comb(d, 2) % 2
    assert theta_image(0, 3, 2) == 0


def test_theta_against_golden(golden):
    for row in golden("bv_small.json"):
        r = row["rank"]
        for i, d, v in row["theta_image"]:
            assert theta_image(i, d, r) == v, (r, i, d)


def test_theta_periodicity():
    for d in range(1, 12):
        assert theta_image(5, d, 2) == theta_image(1, d + 8, 2)


def test_qo_table():
    assert qo_table(0, 6, 3).free_rank == 4
    for k in range(3):
        for r in (1, 2, 3):
            q = qo_table(0, 8 * k, r)
            assert (q.kind, q.index, q.free_rank) == ("Z2", 4 * k, 2**r - 1)
    for r in (1, 2, 3, 4):
        assert qo_table(1, 7, r).free_rank == dim_pbarF_power(4, r)


def test_ko_totals():
    assert ko_total(4, 3) == ("Z2", 7)
    assert ko_total(7, 3) == ("F", 7)
    assert ko_total(5, 3) is None


def test_qo_quotients_rank_one():
    for n in range(-3, 5):
        for d in range(-8, 25):
            if d % 8 in (6, 7):
                assert qo_quotient(n, d, 1) <= 1


@pytest.mark.parametrize("r", [1, 2, 3])
def test_detection(r):
    rep = detection_check(r, 24 + 1 + offset(5))
    assert rep.ok and rep.unreliable == 0


def test_ses_report_json():
    reports = [ses_report(n, d, 2) for n in range(0, 4) for d in range(0, 9)]
    obj = json.loads(tables_json(reports))
    assert obj["schema"] == "a1kit-ko-table" and obj["version"] == 1
    assert len(obj["rows"]) == 36
    assert set(obj["rows"][0]) == {"level", "degree", "rank", "qo", "torsion_dim", "homology_dim", "flags"}
    assert all(all(r["flags"].values()) for r in obj["rows"])


def test_exact_couple():
    assert exact_couple_check(st_tu_couple(2, 24)).ok
    bad = exact_couple_check(corrupt_delta(st_tu_couple(2, 24), 8))
    assert not bad.ok
    assert bad.failures[0][0] == 8


def test_zero_couple_passes():
    c = ExactCoupleData(0, 5, {}, {}, {}, {}, {})
    v = exact_couple_check(c)
    assert v.ok and v.failures == []
    assert c.map_q(0) == GF2Matrix(0, 0)

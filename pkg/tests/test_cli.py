import csv
import io
import json

import pytest

from a1kit.cli import main
from a1kit.grothendieck import figure2_dims


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_a1_check(capsys):
    code, out, _ = run(capsys, "a1", "check", "--format", "json")
    assert code == 0
    assert json.loads(out)["dims_by_degree"] == [1, 1, 1, 2, 1, 1, 1]


def test_toda_homology_csv(capsys):
    code, out, _ = run(capsys, "toda", "homology", "--rank", "2", "--max-degree", "24", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["n", "d", "r", "dim", "reliable"]
    for row in rows:
        if row["reliable"] == "1":
            n, d, r = int(row["n"]), int(row["d"]), int(row["r"])
            assert int(row["dim"]) == figure2_dims(n, d, r)


def test_output_is_deterministic(capsys, tmp_path):
    args = ["toda", "homology", "--rank", "2", "--max-degree", "20", "--format", "json"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    path = tmp_path / "out.json"
    assert main(args + ["--output", str(path), "--threads", "1"]) == 0
    assert path.read_text() == first


def test_verify_periodicity(capsys):
    code, out, _ = run(capsys, "verify", "periodicity", "--n", "0", "--max-degree", "48")
    assert code == 0 and out.strip().endswith("PASS")


def test_ko_detect(capsys):
    code, out, _ = run(capsys, "ko", "detect", "--rank", "3", "--max-degree", "24")
    assert code == 0 and out.startswith("PASS")


def test_ko_tables_json_schema(capsys):
    code, out, _ = run(capsys, "ko", "tables", "--rank", "2", "--max-degree", "12", "--level", "0..1", "--format", "json")
    obj = json.loads(out)
    assert code == 0
    assert obj["schema"] == "a1kit-ko-table" and obj["rows"]


def test_ko_small_tables(capsys):
    for cmd in ("tu", "sq2h", "st"):
        code, out, _ = run(capsys, "ko", cmd, "--rank", "2", "--max-degree", "14", "--format", "csv")
        assert code == 0 and out.startswith("d,")
    _, out, _ = run(capsys, "ko", "sq2h", "--rank", "2", "--max-degree", "14", "--format", "json")
    rows = dict(map(tuple, json.loads(out)["rows"]))
    assert rows[6] == 1 and sum(rows.values()) == 1


def test_gk(capsys):
    assert run(capsys, "gk", "decompose", "--dims", "0,1,3,7")[1].strip() == "Λ^1 + Λ^2 + Λ^3"
    code, out, _ = run(capsys, "gk", "decompose", "--dims", "0,2,4,6")
    assert code == 1 and "multiplicity" in out
    assert run(capsys, "gk", "decompose", "--dims", "0,2,4,6", "--generalized")[1].strip() == "2·Λ^1"
    code, out, _ = run(capsys, "gk", "figure2", "--n", "0", "--d", "8", "--rank", "2", "--format", "csv")
    assert out.splitlines()[1].split(",")[3] == "3"


def test_module_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "module", "split-free", "--builtin", "J(x)J", "--format", "json")
    assert code == 0
    res = json.loads(out)
    assert res["free_part"] == {"-2": 1, "-3": 1, "-4": 1}
    code, out, _ = run(capsys, "module", "syzygy", "--builtin", "P0", "--max-degree", "20")
    path = tmp_path / "omega.json"
    path.write_text(out)
    code, out, _ = run(capsys, "module", "stable-equal", "--input", str(path), "--other-builtin", "P", "--shift", "1", "--max-degree", "20")
    assert code == 0 and out.startswith("EQUAL")
    code, out, _ = run(capsys, "module", "stable-equal", "--builtin", "P", "--other-builtin", "P", "--shift", "1")
    assert code == 1 and "witness degree 1" in out
    code, out, _ = run(capsys, "module", "margolis", "--builtin", "P", "--format", "csv")
    assert all(r.split(",")[2] == "0" for r in out.splitlines()[1:] if r.startswith("Q0"))


def test_toda_decalage(capsys):
    code, out, _ = run(capsys, "toda", "decalage", "--builtin", "P", "--max-degree", "32")
    assert code == 0 and "PASS" in out
    code, _, err = run(capsys, "toda", "decalage", "--builtin", "J")
    assert code == 2 and "Q0-acyclic" in err


def test_bv_cohomology(capsys):
    code, out, _ = run(capsys, "bv", "cohomology", "--rank", "2", "--max-degree", "5", "--format", "csv")
    assert out.splitlines()[1:] == ["1,2", "2,3", "3,4", "4,5", "5,6"]


@pytest.mark.parametrize(
    "argv",
    [
        ["bv", "cohomology", "--rank", "0"],
        ["bv", "cohomology", "--rank", "2", "--max-degree", "0"],
        ["toda", "homology", "--rank", "2", "--range", "3..1"],
        ["toda", "homology", "--rank", "2", "--format", "xml"],
        ["module", "margolis"],
        ["module", "margolis", "--builtin", "nonsense"],
        ["nonsense"],
    ],
)
def test_usage_errors(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as e:
        code = e.code
    assert code == 2


def test_verify_exact_couple(capsys):
    code, out, _ = run(capsys, "verify", "exact-couple", "--rank", "2")
    assert code == 0 and "PASS" in out

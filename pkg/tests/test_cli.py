import json

import pytest

from fcadepth import dumps_cxt, loads_cxt, read_context
from fcadepth.cli import main

from golden import DATA, cyclic_triangle, occupation_hierarchy, outlier_example_context, titanic_snippet


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def titanic_cxt(tmp_path, capsys):
    code, _, _ = run(capsys, "scale", "--data", DATA / "titanic.csv", "--spec", DATA / "titanic_spec.json",
                     "--out", tmp_path / "titanic")
    assert code == 0
    return tmp_path / "titanic.cxt"


def test_scale_titanic(tmp_path, capsys):
    code, out, _ = run(capsys, "scale", "--data", DATA / "titanic.csv", "--spec", DATA / "titanic_spec.json",
                       "--out", tmp_path / "t.cxt")
    assert code == 0
    assert out.splitlines() == ["objects: 5", "attributes: 15", "extents: 20"]
    ctx = read_context(tmp_path / "t.cxt")
    assert ctx == titanic_snippet() == read_context(tmp_path / "t.json")
    assert dumps_cxt(loads_cxt((tmp_path / "t.cxt").read_text())) == (tmp_path / "t.cxt").read_text()


def test_scale_hierarchy_and_posets(tmp_path, capsys):
    code, out, _ = run(capsys, "scale", "--data", DATA / "hierarchical.csv", "--out", tmp_path / "h")
    assert code == 0 and "attributes: 6" in out and "extents: 8" in out
    assert read_context(tmp_path / "h.cxt").rows == occupation_hierarchy().rows
    code, out, err = run(capsys, "scale", "--posets", DATA / "posets.json")
    assert code == 0 and "attributes: 4" in err
    assert loads_cxt(out).attribute_labels == ("1≺2", "2≺1", "¬(1≺2)", "¬(2≺1)")
    code, _, err = run(capsys, "scale", "--posets", DATA / "posets.json", "--no-negations")
    assert "attributes: 2" in err


def test_scale_points(capsys):
    code, out, err = run(capsys, "scale", "--points", DATA / "points.json")
    assert code == 0 and loads_cxt(out).object_labels == ("x1", "x2", "x3")


def test_depth_titanic(titanic_cxt, capsys):
    code, out, _ = run(capsys, "depth", "--context", titanic_cxt)
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()[1:]]
    assert [(r[0], r[1]) for r in rows] == [("g1", "2/5"), ("g2", "2/5"), ("g3", "1/5"), ("g4", "1/5"),
                                             ("g5", "2/5")]
    code, out, _ = run(capsys, "depth", "--context", titanic_cxt, "--float", "--format", "json")
    doc = json.loads(out)
    assert doc["rows"][0] == {"object": "g1", "depth": "2/5", "rank": 1, "tie_group": 1, "float": 0.4}


def test_depth_with_sample(tmp_path, capsys):
    path = tmp_path / "right.cxt"
    path.write_text(dumps_cxt(outlier_example_context()))
    code, out, _ = run(capsys, "depth", "--context", path, "--sample", "g2,g3")
    rows = dict(line.split("\t")[:2] for line in out.splitlines()[1:])
    assert code == 0 and rows["g2"] == "1/2" and rows["g3"] == "1/1"
    labels = tmp_path / "sample.txt"
    labels.write_text("g2\ng3\n")
    assert run(capsys, "depth", "--context", path, "--sample", labels)[1] == out


def test_depth_single_object(tmp_path, capsys):
    path = tmp_path / "one.cxt"
    path.write_text("B\n\n1\n1\n\ng\nm\n.\n")
    code, out, _ = run(capsys, "depth", "--context", path)
    assert out.splitlines()[1].split("\t")[1] == "1/1"


def test_depth_weights_file(tmp_path, capsys, titanic_cxt):
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"weights": {"g1": "1/2", "g2": 1, "g3": 1, "g4": 0, "g5": 0.5}}))
    code, out, _ = run(capsys, "depth", "--context", titanic_cxt, "--measure", w)
    assert code == 0 and out.count("\n") == 6


def test_check_titanic_exit_zero(titanic_cxt, capsys):
    code, out, _ = run(capsys, "check", "--context", titanic_cxt, "--check", "P2,P3-P5,P6,P7")
    doc = json.loads(out)
    assert code == 0
    assert {r["verdict"] for r in doc["reports"]} <= {"holds", "premise-not-met"}
    assert all(r["runtime_ms"] is None for r in doc["reports"])


def test_check_blocked_context(tmp_path, capsys):
    path = tmp_path / "diag.cxt"
    path.write_text(dumps_cxt(cyclic_triangle()))
    code, out, _ = run(capsys, "check", "--context", path, "--check", "C_notP8")
    report = json.loads(out)["reports"][0]
    assert code == 0 and report["witness"]["certificate"] == "cyclic-triple"
    code, out, _ = run(capsys, "check", "--context", path, "--check", "P8")
    assert code == 1


def test_check_outlier_and_duplicate(tmp_path, capsys, titanic_cxt):
    path = tmp_path / "right.cxt"
    path.write_text(dumps_cxt(outlier_example_context()))
    code, out, _ = run(capsys, "check", "--context", path, "--sample", "g1,g2,g3", "--outlier", "g1",
                       "--check", "P10")
    assert code == 1 and json.loads(out)["reports"][0]["verdict"] == "fails"
    code, out, _ = run(capsys, "check", "--context", titanic_cxt, "--sample", "g1,g2,g2,g3,g4,g5", "--dup", "1,2",
                       "--check", "P9")
    assert code == 0 and json.loads(out)["reports"][0]["witness"]["with_duplicate"] == "1/2"


def test_check_consistency_reproducible(titanic_cxt, capsys, tmp_path):
    args = ["check", "--context", titanic_cxt, "--check", "P11", "--seed", "11", "--sizes", "10,100", "--trials",
            "5"]
    first = run(capsys, *args, "--out", tmp_path / "a.json")
    second = run(capsys, *args, "--out", tmp_path / "b.json")
    assert first[0] == second[0]
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert run(capsys, "check", "--context", titanic_cxt, "--check", "P11")[0] == 2


def test_check_symmetry(tmp_path, capsys):
    path = tmp_path / "tree.cxt"
    path.write_text(dumps_cxt(occupation_hierarchy()))
    code, out, _ = run(capsys, "check", "--context", path, "--check", "SYM", "--involution",
                       "b1b2,b1a2,a1b2,a1a2", "--center", "a1a2")
    assert code == 0 and json.loads(out)["reports"][0]["verdict"] == "holds"


def test_check_cap_is_inconclusive(tmp_path, capsys):
    path = tmp_path / "big.cxt"
    path.write_text("B\n\n13\n1\n\n" + "".join(f"g{i}\n" for i in range(13)) + "m\n" + "X\n" * 13)
    code, out, _ = run(capsys, "check", "--context", path, "--check", "P8")
    assert code == 0 and json.loads(out)["reports"][0]["verdict"] == "inconclusive-cap"


def test_timing_flag(titanic_cxt, capsys):
    _, out, _ = run(capsys, "check", "--context", titanic_cxt, "--check", "P2", "--timing")
    assert isinstance(json.loads(out)["reports"][0]["runtime_ms"], float)


def test_extents_command(titanic_cxt, capsys):
    code, out, _ = run(capsys, "extents", "--context", titanic_cxt)
    assert code == 0 and json.loads(out)["count"] == 20
    assert run(capsys, "extents", "--context", titanic_cxt, "--cap-extents", "3")[0] == 3


@pytest.mark.parametrize("argv", [
    ["depth"],
    ["depth", "--context", "/nonexistent.cxt"],
    ["depth", "--data", "DATA/titanic.csv", "--context", "x.cxt"],
    ["depth", "--data", "DATA/titanic.csv", "--depth", "oja"],
    ["depth", "--data", "DATA/titanic.csv", "--sample", "g1,g9"],
    ["check", "--data", "DATA/titanic.csv", "--check", "P99"],
    ["check", "--data", "DATA/titanic.csv", "--check", "P10"],
])
def test_input_errors_exit_two(argv, capsys):
    argv = [a.replace("DATA", str(DATA)) for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_ingestion_error_coordinates(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("id,age\na,3\nb,old\n")
    spec = tmp_path / "spec.json"
    spec.write_text('{"columns": {"age": {"scale": "interordinal"}}}')
    code, _, err = run(capsys, "scale", "--data", bad, "--spec", spec)
    assert code == 2 and "row 2" in err and "'age'" in err

import json
from fractions import Fraction

import pytest

from acmg import catalog as cat
from acmg import report as rp
from acmg.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_report_json_round_trip_exact():
    rep = rp.analyze(cat.heisenberg_h1r(1))
    back = rp.AnalysisReport.from_json(rep.to_json())
    assert back == rep
    assert back.curvature["s"] == Fraction(-1, 2)


def test_report_json_round_trip_float():
    rep = rp.analyze(cat.h12_example("B"))
    back = rp.AnalysisReport.from_json(rep.to_json())
    assert back.to_dict() == rep.to_dict()


def test_text_and_json_carry_the_same_numbers(capsys):
    code, text, _ = _run(capsys, "curvature", "--model", "h1r", "--r", "1", "--exact")
    assert code == 0
    code, js, _ = _run(capsys, "curvature", "--model", "h1r", "--r", "1", "--exact", "--format", "json")
    data = json.loads(js)
    assert data["s"] == "-1/2" and data["s_ac"] == "1/2"
    assert "s: -1/2" in text and "s_ac: 1/2" in text


def test_harmonic_example(capsys):
    code, out, _ = _run(capsys, "harmonic", "--model", "hyperbolic", "--n", "1", "--c", "1",
                        "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["harmonic"] is True and data["harmonic_map"] is False
    assert data["class"] == ["C5"]


def test_classify_example(capsys):
    code, out, _ = _run(capsys, "classify", "--model", "h12", "--tag", "A", "--format", "json")
    assert code == 0
    assert json.loads(out)["class"] == ["C8", "C9"]


def test_verify_example(capsys):
    code, out, _ = _run(capsys, "verify", "--model", "abelian", "--n", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["ok"]
    assert all(c["value"] == 0 for c in data["checks"] if c["suite"] == "torsion")


def test_verify_whole_catalog(capsys):
    code, out, _ = _run(capsys, "verify")
    assert code == 0
    assert out.strip().endswith("all asserted checks pass")


def test_malformed_model_file_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dimension": 3, "structure_constants": [{"i": 1, "j": 9, "k": 2, "value": 1}],
                                "phi": [[0, -1, 0], [1, 0, 0], [0, 0, 0]], "zeta": [0, 0, 1]}))
    code, _, err = _run(capsys, "classify", "--model", str(path))
    assert code == 2
    assert str(path) in err and "structure_constants[0].j" in err


@pytest.mark.parametrize("argv", [
    ["classify"],
    ["classify", "--model", "nope"],
    ["classify", "--model", "h12", "--tag", "A", "--exact"],
    ["classify", "--model", "hyperbolic", "--n", "0"],
])
def test_input_errors_exit_two(capsys, argv):
    code, _, err = _run(capsys, *argv)
    assert code == 2
    assert err.startswith("acmg: error:")


def test_bad_phi_file_exits_two(tmp_path, capsys):
    path = tmp_path / "phi.json"
    path.write_text("[[0, 1], [1]]")
    code, _, err = _run(capsys, "classify", "--model", "h1r", "--r", "1", "--phi", str(path))
    assert code == 2 and "row 1" in err


def test_phi_file_selects_structure(tmp_path, capsys):
    path = tmp_path / "phi.json"
    path.write_text(json.dumps({"phi": [[0, -1], [1, 0]]}))
    code, out, _ = _run(capsys, "classify", "--model", "hp1", "--p", "1", "--phi", str(path),
                        "--exact", "--format", "json")
    assert code == 0 and json.loads(out)["class"] == ["C6"]


def test_tolerance_precedence(monkeypatch, capsys):
    monkeypatch.setenv("ACMG_TOLERANCE", "1e-5")
    _, out, _ = _run(capsys, "report", "--model", "abelian", "--n", "1", "--format", "json")
    assert json.loads(out)["model"]["tolerance"] == 1e-5
    _, out, _ = _run(capsys, "report", "--model", "abelian", "--n", "1", "--tolerance", "1e-7",
                     "--format", "json")
    assert json.loads(out)["model"]["tolerance"] == 1e-7
    monkeypatch.setenv("ACMG_TOLERANCE", "abc")
    code, _, err = _run(capsys, "report", "--model", "abelian", "--n", "1")
    assert code == 2 and "ACMG_TOLERANCE" in err


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = _run(capsys, "report", "--model", "su2", "--r", "2", "--exact", "--format", "json",
                        "--output", str(target))
    assert code == 0 and out == ""
    rep = rp.AnalysisReport.from_json(target.read_text())
    assert rep.ok
    assert rep.energy["bending"] == Fraction(1, 2)

import json
from pathlib import Path

import jsonschema
import pytest

from derivorder import __version__
from derivorder.cli import main
from derivorder.report import analyze_report, render_text
from derivorder.dsl import parse_spec

ROOT = Path(__file__).resolve().parents[1]
SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())
GOLDEN = Path(__file__).parent / "golden"
FIVE = "f1(x^24)*g1(x^5) + f2(x^20)*g2(x^9) + f3(x^19)*g3(x^10) + f4(x^13)*g4(x^7) + f5(x^12)*g5(x^8) = 0"
TWO = "f1(x)*g1(x^4) + f2(x^2)*g2(x^3) = 0"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    return data, out


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


def test_homogenize_golden(capsys):
    _, out = report(capsys, "homogenize", FIVE)
    assert out == (GOLDEN / "homogenize_five_terms.json").read_text()


def test_analyze_five_terms(capsys):
    data, _ = report(capsys, "analyze", FIVE)
    comps = data["components"]
    assert [c["N"] for c in comps] == [29, 20]
    assert [c["scan"]["certified_bound"] for c in comps] == [2, 1]
    assert all(c["oracle"]["disagreements"] == 0 for c in comps)


def test_analyze_two_terms_bound(capsys):
    data, _ = report(capsys, "analyze", TWO)
    comp, = data["components"]
    assert comp["scan"]["certified_bound"] == 1
    assert comp["max_order"] == 4
    assert comp["certificates_verified"] == 21


def test_analyze_is_byte_identical(capsys):
    _, a = report(capsys, "analyze", TWO, "--seed", "5")
    _, b = report(capsys, "analyze", TWO, "--seed", "5")
    assert a == b


def test_timing_is_opt_in(capsys):
    data, _ = report(capsys, "analyze", TWO, "--timing", "--points", "0")
    assert "timing" in data
    data, _ = report(capsys, "analyze", TWO, "--points", "0")
    assert "timing" not in data


def test_refused_component(capsys):
    data, _ = report(capsys, "analyze", "f1(x)*g1(x^4) + f2(x^4)*g2(x) = 0")
    comp, = data["components"]
    assert comp["status"] == "refused" and "C(iii)" in comp["reason"]


def test_component_flag(capsys):
    data, _ = report(capsys, "analyze", FIVE, "--component", "2", "--max-order", "2")
    assert [c["N"] for c in data["components"]] == [20]
    code, _, err = run(capsys, "analyze", FIVE, "--component", "3")
    assert code == 1 and "component" in err


def test_pinned_equation_bound(capsys):
    # the three pinned f-terms equation admits second-order solutions
    data, _ = report(capsys, "analyze", "x*f1(x^6) + x^2*f2(x^5) + x^3*f3(x^4) = 0", "--max-order", "4")
    assert data["components"][0]["scan"]["bound_k"] == 2


def test_expand(capsys):
    data, _ = report(capsys, "expand", "--k", "2", "--p", "3")
    assert data["expansion"] == "3*X^2*D2 + 6*X*D1^2"
    code, out, _ = run(capsys, "expand", "--k", "2", "--p", "3", "--text")
    assert out.strip() == "d^2(x^3) = 3*X^2*D2 + 6*X*D1^2"
    data, _ = report(capsys, "expand", "--k", "2", "--p", "2", "--product")
    assert {tuple(t["orders"]): t["c"] for t in data["product"]} == {(2, 0): "1", (1, 1): "2", (0, 2): "1"}


def test_verify(capsys, tmp_path):
    coeffs = tmp_path / "c.json"
    coeffs.write_text(json.dumps({"lambda": [{"i": 1, "j": 1, "c": 1}, {"i": 2, "j": 1, "c": 1}]}))
    data, _ = report(capsys, "verify", "f1(x^2) - 2*x*f1(x) = 0", "--coeffs", str(coeffs))
    assert data["verified"] and data["symbolic_residual"] == "0"
    data, _ = report(capsys, "verify", "f1(x^2) - 3*x*f1(x) = 0", "--coeffs", str(coeffs))
    assert not data["verified"]


def test_oracle(capsys):
    ops = json.dumps({"f": {"terms": [{"c": 1, "comp": [1]}]}, "g": {"terms": [{"c": 1, "comp": [2]}]}})
    data, _ = report(capsys, "oracle", "f(x)*g(x^4) - 2/3*f(x^2)*g(x^3) = 0", "--ops", ops)
    assert data["all_zero"]
    data, _ = report(capsys, "oracle", "f(x)*g(x^4) - f(x^2)*g(x^3) = 0", "--ops", ops, "--vars", "3")
    assert not data["all_zero"]


def test_json_equation_file(capsys, tmp_path):
    path = tmp_path / "eq.json"
    path.write_text(json.dumps({"terms": [{"i": 1, "p": 1, "q": 4}, {"i": 2, "p": 2, "q": 3}]}))
    data, _ = report(capsys, "homogenize", str(path))
    assert data["components"][0]["N"] == 5


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "f1(x^"],
        ["analyze", "f1(x^0)*g1(x) = 0"],
        ["expand", "--k", "70", "--p", "2"],
        ["verify", TWO, "--coeffs", "{not json"],
        ["oracle", TWO, "--ops", "[]"],
        ["homogenize", "missing.json"],
        ["frobnicate"],
    ],
)
def test_input_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""


def test_syntax_error_reports_column(capsys):
    _, _, err = run(capsys, "analyze", "f1(x^")
    assert "column 6" in err


def test_invariant_failure_exit_2(capsys, monkeypatch):
    import derivorder.report as rep

    monkeypatch.setattr(rep, "verify_certificate", lambda *a, **k: False)
    code, _, err = run(capsys, "analyze", TWO)
    assert code == 2 and "certificate" in err


def test_text_rendering():
    text = render_text(analyze_report(parse_spec(TWO)))
    assert "certified_bound=1" in text
    assert text.splitlines()[0] == f"equation: {TWO}"


def test_version_in_reports(capsys):
    data, _ = report(capsys, "expand", "--k", "1", "--p", "1")
    assert data["version"] == __version__

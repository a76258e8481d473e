"""CLI behavior: values, JSON round-trips, determinism, and exit codes."""

import json
import math

import pytest
from mpmath import mp

from sunorm.cli import EXIT_PRECISION, EXIT_USAGE, EXIT_VALIDATION, main, run

from conftest import raw_fixture

GOLDEN = (1 + math.sqrt(5)) / 2


def ok(argv):
    doc, code = run(argv)
    assert code == 0, doc.get("error")
    return doc


def test_validate(capsys):
    doc = ok(["validate", "--fixture", "qbiquad"])
    assert doc["outputs"]["degree"] == 4
    assert len(doc["outputs"]["subfields"]) == 5
    assert doc["outputs"]["s_unit_rank"] == 5


def test_height_golden():
    doc = ok(["height", "--fixture", "qsqrt5", "--element", "golden", "--p", "1"])
    val = float(doc["outputs"]["height"]["value"])
    assert abs(val - math.log(GOLDEN)) < 1e-12
    assert float(doc["outputs"]["height"]["error"]) < 1e-40


def test_delta_sqrt2():
    doc = ok(["delta", "--fixture", "qsqrt2", "--element", "sqrt2"])
    assert doc["outputs"]["delta"] == 1


def test_extremal_golden():
    doc = ok(["extremal-m1", "--fixture", "qsqrt5", "--element", "golden"])
    assert abs(float(doc["outputs"]["total"]["value"]) - 2 * math.log(GOLDEN)) < 1e-9
    assert doc["outputs"]["certified"] is True
    assert [p["subfield"] for p in doc["outputs"]["parts"]] == ["Q(sqrt5)"]


def test_qnorm_and_eta():
    doc = ok(["qnorm", "--fixture", "qsqrt2", "--element", "silver", "--subfield", "Q"])
    assert abs(float(doc["outputs"]["qnorm"]["value"]) - math.log(1 + math.sqrt(2))) < 1e-12
    doc = ok(["eta", "--fixture", "qsqrt2", "--element", "silver", "--subfield", "Q"])
    assert doc["outputs"]["k"] == 1
    assert doc["outputs"]["xv_inequality_ok"] is True
    assert abs(float(doc["outputs"]["eta_height_raw"]["value"])) < 1e-12


def test_element_by_coordinates():
    doc = ok(["height", "--fixture", "qsqrt2", "--element", "0,2", "--p", "1"])
    assert abs(float(doc["outputs"]["height"]["value"]) - 2 * math.log(2)) < 1e-12


def test_project_field():
    doc = ok(["project-field", "--fixture", "qbiquad", "--element", "lambda",
              "--subfield", "Q(sqrt2)"])
    assert float(doc["outputs"]["height_after"]["value"]) < 1e-40


def test_project_sunits():
    doc = ok(["project-sunits", "--fixture", "qsqrt2-ext", "--element", "seven-silver"])
    out = doc["outputs"]
    assert out["projection"]["fin"] == {}
    assert abs(float(out["projection"]["arch"]["0"]["value"])
               - math.log(1 + math.sqrt(2))) < 1e-9
    assert out["delta_after"] <= out["delta_before"]


def test_oracle_check_small():
    doc = ok(["oracle-check", "--fixture", "qsqrt5", "--count", "3", "--seed", "7"])
    assert doc["outputs"]["instances"] == 6
    assert float(doc["outputs"]["max_abs_dev_simplex"]) <= 1e-9


def test_subfield_by_index():
    doc = ok(["qnorm", "--fixture", "qsqrt2", "--element", "silver", "--subfield", "0"])
    assert doc["outputs"]["subfield"] == "Q"


def test_json_deterministic(capsys):
    argv = ["extremal-m1", "--fixture", "qsqrt5", "--element", "golden", "--json"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    assert doc["status"] == "ok"


def test_json_roundtrip_values(capsys):
    argv = ["height", "--fixture", "qsqrt5", "--element", "golden", "--json"]
    assert main(argv) == 0
    doc = json.loads(capsys.readouterr().out)
    reparsed = mp.mpf(doc["outputs"]["height"]["value"])
    assert abs(float(reparsed) - math.log(GOLDEN)) < 1e-12


def test_table_output(capsys):
    assert main(["height", "--fixture", "qsqrt5", "--element", "golden"]) == 0
    out = capsys.readouterr().out
    assert "status: ok" in out
    assert "+/-" in out


def test_exit_usage_unknown_element():
    doc, code = run(["height", "--fixture", "qsqrt5", "--element", "nope"])
    assert code == EXIT_USAGE
    assert doc["status"] == "error"


def test_exit_usage_missing_subfield():
    doc, code = run(["qnorm", "--fixture", "qsqrt2", "--element", "silver"])
    assert code == EXIT_USAGE


def test_exit_validation_bad_fixture(tmp_path):
    bad = raw_fixture("qsqrt2")
    bad["places"][2]["local_degree"] = 7
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(bad))
    doc, code = run(["validate", "--fixture", str(p)])
    assert code == EXIT_VALIDATION
    assert doc["error"]["type"] == "InvariantViolation"


def test_exit_precision_low_digit_fixture(tmp_path):
    bad = raw_fixture("qsqrt2")
    bad["s_unit_basis"][0]["arch"] = {"0": "0.881374", "1": "-0.881374"}
    p = tmp_path / "lowprec.json"
    p.write_text(json.dumps(bad))
    doc, code = run(["validate", "--fixture", str(p)])
    assert code == EXIT_PRECISION


def test_exit_usage_no_such_fixture():
    doc, code = run(["validate", "--fixture", "nowhere"])
    assert code == EXIT_USAGE


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as exc:
        run(["no-such-command", "--fixture", "q"])
    assert exc.value.code == EXIT_USAGE

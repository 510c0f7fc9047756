import json
import subprocess
import sys
from pathlib import Path

import pytest

from milnorlab import cli
from milnorlab.cli import Job, main, run, run_batch, to_json_text
from milnorlab.critloc import FibrationReport
from milnorlab.newton import MultiplicityVerdict

GOLDEN = Path(__file__).parent / "golden"
EXAMPLES = {
    "cusp_circle": ("x^3+y^2", "x^2+y^2"),
    "two_cusps": ("x^3-y^2", "x^2-y^3"),
    "quartic_pair": ("x*y^2+x^4+y^4", "x^2*y+y^4+x^4"),
    "quintic_pair": ("x^5+x^2*y^2+y^6", "x^6+x^2*y^2+y^5"),
    "quadric_pair": ("x^2+x*y+y^2", "x^2-x*y+y^2"),
}


def cli_run(*args):
    return subprocess.run([sys.executable, "-m", "milnorlab", *args], capture_output=True, text=True)


def test_zeta_command(capsys):
    assert main(["zeta", "-f", "x^2+y^3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["result"]["zeta_f"]["factors"] == [{"d": 2, "e": 1}, {"d": 3, "e": 1}, {"d": 6, "e": -1}]
    assert doc["result"]["zeta_f"]["milnor"] == 2


def test_zeta_mixed_violation_exit_2():
    out = cli_run("zeta-mixed", "-f", "x^3+y^2", "-g", "x^2+y^2")
    assert out.returncode == 2
    assert "Newton multiplicity condition violated; witness P=(1,1)" in out.stderr
    assert json.loads(out.stdout)["error"]["type"] == "MultiplicityConditionViolated"


def test_fibration_subprocess():
    out = cli_run("fibration", "-f", "x^3+y^2", "-g", "x^2+y^2")
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"]["verdict"] == "obstructed"


@pytest.mark.parametrize(
    "argv",
    [
        ["zeta", "-f", "x^2+*y"],
        ["fibration", "-f", "x^3+y^2"],
        ["zeta", "-f", "x+w"],
        ["puiseux", "-f", "y^2-x^3", "--order", "2"],
        ["bogus"],
    ],
)
def test_input_errors_exit_1(argv, capsys):
    assert main(argv) == 1


def test_parse_error_message(capsys):
    main(["zeta", "-f", "x^2+*y"])
    err = capsys.readouterr().err
    assert "position 4" in err and "^" in err


def test_precondition_exit_2(capsys):
    assert main(["zeta", "-f", "x^2*y+y^3"]) == 2
    doc = json.loads(capsys.readouterr().out)
    assert doc["error"]["type"] == "NotConvenientError"


def test_inconclusive_exit_3(monkeypatch):
    def fake(*args, **kwargs):
        return FibrationReport(MultiplicityVerdict(False, (1, 1), None, ("scan",)), verdict="inconclusive")

    monkeypatch.setattr(cli, "fibration_verdict", fake)
    doc, code = run(Job(command="fibration", f="x^3+y^2", g="x^2+y^2"))
    assert code == 3 and doc["status"] == "inconclusive"


def test_unexpected_error_is_contained(monkeypatch):
    def boom(*args, **kwargs):
        raise ZeroDivisionError("boom")

    monkeypatch.setattr(cli, "zeta_plane", boom)
    doc, code = run(Job(command="zeta", f="x^2+y^3"))
    assert code == 3 and doc["error"]["type"] == "InternalError"


def test_header():
    doc, _ = run(Job(command="jacobian", f="x^3+y^2", g="x^2+y^2"))
    assert doc["version"] and doc["convention"] == "corner-positive-edge-negative"
    assert set(doc["tolerances"]) == {"unit_modulus", "root_residual", "series_zero_relative", "rational_snap"}
    assert doc["result"]["factored"] == "2*x*y*(3*x - 2)"


def test_zeta3h_default_variables():
    doc, code = run(Job(command="zeta3h", f="z1^2+z2^2+z3^2", g="z1+z2+z3"))
    assert code == 0 and doc["input"]["variables"] == ["z1", "z2", "z3"]
    assert doc["result"]["zeta_H"]["factors"] == [{"d": 1, "e": -1}]


def test_custom_variables(capsys):
    assert main(["jacobian", "-f", "u^3+v^2", "-g", "u^2+v^2", "--vars", "u,v"]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["jacobian"] == "6*u^2*v - 4*u*v"


def test_text_format_and_out(tmp_path):
    target = tmp_path / "r.txt"
    assert main(["multcond", "-f", "x^3+y^2", "-g", "x^2+y^2", "--format", "text", "--out", str(target)]) == 0
    text = target.read_text()
    assert "satisfied: no" in text and "witness:" in text


def test_puiseux_and_newton_commands():
    doc, code = run(Job(command="puiseux", f="y^2-x^3"))
    assert code == 0 and doc["result"]["branches"][0]["residual_order"] == "exact"
    doc, code = run(Job(command="newton", f="x^5+x^2*y^2+y^6"))
    assert code == 0 and doc["result"]["f"]["newton_number"] == 12


def test_batch_matches_golden(tmp_path):
    jobs = tmp_path / "jobs.json"
    jobs.write_text(json.dumps([{"command": "fibration", "f": f, "g": g} for f, g in EXAMPLES.values()]))
    doc, code = run_batch(str(jobs))
    assert code == 0
    for name, report in zip(EXAMPLES, doc["jobs"]):
        assert to_json_text(report) == (GOLDEN / f"{name}.json").read_text()


def test_batch_empty(tmp_path):
    jobs = tmp_path / "jobs.json"
    jobs.write_text("[]")
    doc, code = run_batch(str(jobs))
    assert code == 0 and doc["jobs"] == []


def test_batch_isolates_bad_job(tmp_path):
    jobs = tmp_path / "jobs.json"
    jobs.write_text(
        json.dumps(
            [
                {"command": "zeta", "f": "x^2+y^3"},
                {"command": "zeta", "f": "x^^2"},
                {"command": "jacobian", "f": "x^3+y^2", "g": "x^2+y^2"},
            ]
        )
    )
    doc, code = run_batch(str(jobs))
    assert code == 1
    assert [j["exit_code"] for j in doc["jobs"]] == [0, 1, 0]


def test_batch_malformed_file(tmp_path):
    bad = tmp_path / "jobs.json"
    bad.write_text("{not json")
    assert run_batch(str(bad))[1] == 1
    bad.write_text('{"command": "zeta"}')
    assert run_batch(str(bad))[1] == 1
    assert main(["batch"]) == 1


def test_byte_identical(capsys):
    args = ["fibration", "-f", "x*y^2+x^4+y^4", "-g", "x^2*y+y^4+x^4"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from chowbeta.cli import main, read_table

from conftest import FIXTURES


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_chow_conic_report(capsys):
    code, out, _ = run(["chow", "--spec", "fixture:conic", "--m-range", "1..5", "--format", "structured"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["values"]["e_c"] == "4/1"
    assert data["values"]["normalized"] == "1/1"


def test_beta_conic_report(capsys):
    code, out, _ = run(["beta", "--spec", "fixture:conic", "--format", "structured"], capsys)
    vals = json.loads(out)["values"]
    assert code == 0
    assert vals["beta_chow"] == "1/1"
    assert abs(float(vals["beta_g"]["decimal"]) - 1) < 2e-2
    assert vals["beta_transform_exact"] == "1/1"


@pytest.mark.parametrize("name", FIXTURES)
def test_verify_bundled_fixtures(name, capsys):
    code, out, _ = run(["verify", "--spec", f"fixture:{name}"], capsys)
    assert code == 0, out
    assert "FAIL" not in out


def test_verify_plane_reports_two_thirds(capsys):
    code, out, _ = run(["verify", "--spec", "fixture:p2_point"], capsys)
    assert code == 0
    assert "beta_chow = 2/3" in out


def _corrupted(tmp_path, old, new):
    from chowbeta.cli import load_spec_text

    text, _ = load_spec_text("fixture:conic")
    assert old in text
    path = tmp_path / "bad.yaml"
    path.write_text(text.replace(old, new))
    return str(path)


@pytest.mark.parametrize("new", ["x0*x2 - x1^2 + x0^2", "x0^2*x2 - x1^3", "x1*x2", "x0*x2"])
def test_corrupted_generator_fails_a_check(tmp_path, capsys, new):
    path = _corrupted(tmp_path, "x0*x2 - x1^2", new)
    code, out, _ = run(["verify", "--spec", path], capsys)
    assert code == 1


def test_inhomogeneous_spec_is_usage_error(tmp_path, capsys):
    path = _corrupted(tmp_path, "x0*x2 - x1^2", "x0*x2 - x1")
    code, _, err = run(["verify", "--spec", path], capsys)
    assert code == 2
    assert "not homogeneous" in err


def test_usage_errors(capsys):
    assert run(["frobnicate", "--spec", "fixture:conic"], capsys)[0] == 2
    assert run(["chow"], capsys)[0] == 2
    assert run(["chow", "--spec", "fixture:nope"], capsys)[0] == 2
    assert run(["chow", "--spec", "fixture:conic", "--m-range", "5..1"], capsys)[0] == 2
    assert run(["chow", "--spec", "fixture:conic", "--level", "0"], capsys)[0] == 2


def test_short_range_is_a_check_failure_with_hint(capsys):
    code, _, err = run(["chow", "--spec", "fixture:p2_point", "--m-range", "1..3"], capsys)
    assert code == 1
    assert "increase --m-range" in err


def test_reports_are_byte_stable(capsys):
    args = ["measure", "--spec", "fixture:p2_point", "--m-range", "1..4", "--format", "structured"]
    first = run(args, capsys)[1]
    second = run(args, capsys)[1]
    assert first == second


def test_body_file_round_trips(tmp_path, capsys):
    out = tmp_path / "body.txt"
    code, report, _ = run(["body", "--spec", "fixture:p2_point", "--level", "3", "--out", str(out)], capsys)
    assert code == 0
    text = out.read_text()
    assert text.splitlines()[0] == "# okounkov-body d=2 M=3"
    data = read_table(text)
    assert set(data["vertices"]) == {(0, 0), (1, 0), (0, 1)}
    assert str(out) in report


def test_transform_file_round_trips(tmp_path, capsys):
    out = tmp_path / "g.txt"
    code, _, _ = run(["transform", "--spec", "fixture:p2_point", "--level", "3", "--out", str(out)], capsys)
    assert code == 0
    data = read_table(out.read_text())
    assert data["kind"] == "concave-transform"
    assert len(data["values"]) == len(data["vertices"])
    assert all(len(s) == 3 for s in data["simplices"])
    for v, g in zip(data["vertices"], data["values"]):
        assert g == v[0] + v[1]


def test_report_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, _ = run(["hilbert", "--spec", "fixture:twisted_cubic", "--format", "structured",
                           "--out", str(out)], capsys)
    assert code == 0 and stdout == ""
    data = json.loads(out.read_text())
    assert data["values"]["degree_L_X"] == "3/1"
    assert Fraction(data["values"]["hilbert_polynomial"][1]) == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "chowbeta", "hilbert", "--spec", "fixture:p1_linear",
                           "--m-range", "1..3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "hilbert_function = {1: 2, 2: 3, 3: 4}" in proc.stdout

import json
import subprocess
import sys
from fractions import Fraction
from math import gcd

import pytest

from qozeta.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ztop_plain(capsys):
    code, out, _ = run(capsys, "ztop", "--vars", "x,z", "z^2-x^3")
    assert code == 0
    assert out.strip() == "(4*s+5)/((s+1)*(6*s+5))"


def test_monodromy_plain(capsys):
    code, out, _ = run(capsys, "monodromy", "--vars", "x1,x2,z", "z^3+x1*x2")
    assert code == 0 and out.strip() == "(1-t^3)"


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "--vars", "x,z", "z^2-x^3")
    assert code == 0 and out.strip() == "OK: recursion == nondegenerate formula"


def test_validate_mismatch_is_internal_error(capsys):
    # forcing the non-degenerate formula on a degenerate germ breaks the equality
    code, out, err = run(capsys, "validate", "--assume-nondegenerate", "--vars", "x,z", "(z^2-x^3)^2+x^7")
    assert code == 2
    assert out == "" and "internal error" in err


@pytest.mark.parametrize(
    "argv, rule",
    [
        (["ztop", "--vars", "x,z", "z^2-x1"], "polynomial grammar"),
        (["ztop", "--vars", "x,z", "--form", "2", "z^2-x^3"], ""),
        (["ztop", "--vars", "x,z"], "input validation"),
        (["nondeg", "--vars", "x,z", "(z^2-x^3)^2+x^7"], ""),
    ],
)
def test_input_errors_exit_one(capsys, argv, rule):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    assert err.startswith("error [") and rule in err


def test_parse_error_reports_position(capsys):
    _, _, err = run(capsys, "ztop", "--vars", "x,z", "z^2-x1")
    assert "unknown variable 'x1' at position 4" in err


def test_json_schema_and_exact_values(capsys):
    code, out, _ = run(capsys, "ztop", "--format", "json", "--vars", "x,z", "z^2-x^3")
    assert code == 0
    report = json.loads(out)
    assert list(report) == ["input", "ztop", "poles"]
    assert report["input"] == {"poly": "z^2-x^3", "vars": ["x", "z"], "nu": [1]}
    assert report["ztop"]["den"] == [[1, 1, 1], [6, 5, 1]]
    assert [Fraction(c) for c in report["ztop"]["num"]] == [5, 4]
    assert [(p["N"], p["nu"], p["s0"], p["order"]) for p in report["poles"]] == [
        (1, 1, "-1", 1),
        (6, 5, "-5/6", 1),
    ]
    assert "." not in out.replace("\n", "")


def test_json_monodromy(capsys):
    _, out, _ = run(capsys, "monodromy", "--format", "json", "--vars", "x1,x2,z", "z^3+x1*x2")
    assert json.loads(out)["monodromy"] == [[3, 1]]


def test_json_verdicts(capsys):
    _, out, _ = run(capsys, "check", "--format", "json", "--vars", "x,z", "z^2-x^3")
    verdicts = json.loads(out)["verdicts"]
    assert [(v["N"], v["nu"]) for v in verdicts] == [(1, 1), (6, 5)]
    assert {v["status"] for v in verdicts} == {"VERIFIED_AT_ORIGIN"}


@pytest.mark.parametrize(
    "text, names",
    [
        ("z^2-x^3", "x,z"),
        ("(z^2-x^3)^2+x^7", "x,z"),
        ("z^2-x1^2*x2", "x1,x2,z"),
        ("(z^2-x^3)^2+x^11*y", "x,y,z"),
    ],
)
def test_ztop_denominators_in_scp(capsys, text, names):
    _, out, _ = run(capsys, "ztop", "--format", "json", "--vars", names, text)
    den = {(N, nu) for N, nu, _ in json.loads(out)["ztop"]["den"]}
    _, out, _ = run(capsys, "poles", "--format", "json", "--vars", names, text)
    report = json.loads(out)
    scp = {(N, nu) for N, nu, _ in report["scp"]}
    # ztop keeps linear factors primitive: 22s+10 is printed as (11,5)
    assert den <= {(N // gcd(N, nu), nu // gcd(N, nu)) for N, nu in scp}
    assert scp <= {(N, nu) for N, nu, _ in report["cp"]}


def test_poles_plain(capsys):
    _, out, _ = run(capsys, "poles", "--vars", "x1,x2,z", "z^2-x1^2*x2")
    assert out.splitlines() == ["CP: (1,1), (2,2), (2,3)", "SCP: (1,1) s=-1, (2,2) s=-1"]


def test_zmot_and_tree(capsys):
    code, out, _ = run(capsys, "zmot", "--vars", "x,z", "z^2-x^3")
    assert code == 0
    assert out.splitlines()[-1] == "chi: (4*s+5)/((s+1)*(6*s+5))"
    code, out, _ = run(capsys, "tree", "--format", "json", "--vars", "x,z", "(z^2-x^3)^2+x^7")
    assert code == 0 and "tree" in json.loads(out)


def test_latex(capsys):
    _, out, _ = run(capsys, "nondeg", "--format", "latex", "--vars", "x,z", "z^2-x^3")
    assert out.strip() == r"\frac{4s+5}{(s+1)(6s+5)}"


def test_file_input_and_trace(capsys, tmp_path):
    path = tmp_path / "cusp.txt"
    path.write_text("z^2-x^3\n")
    code, out, err = run(capsys, "ztop", "--vars", "x,z", "--file", str(path), "--trace")
    assert code == 0
    assert out.strip() == "(4*s+5)/((s+1)*(6*s+5))"
    assert "elapsed" in err


def test_form_exponents(capsys):
    code, out, _ = run(capsys, "ztop", "--vars", "x,z", "--form", "3", "x^2*z")
    assert code == 0
    assert out.strip() == "1/((s+1)*(2*s+3))"


def test_json_byte_identical_across_processes():
    argv = [sys.executable, "-m", "qozeta.cli", "ztop", "--format", "json", "--vars", "x,z", "(z^2-x^3)^2+x^7"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first

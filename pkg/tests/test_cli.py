import json
import subprocess
import sys

import pytest

from nilmat.cli import run
from nilmat.poly import parse_polynomial


@pytest.fixture
def special_file(tmp_path):
    path = tmp_path / "special_2x2.json"
    path.write_text(json.dumps({"ring": "Q", "rows": 2, "cols": 2, "entries": [["1", "-1"], ["1", "1"]]}))
    return str(path)


def out(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_dim_2x2(capsys):
    code, stdout, _ = out(capsys, ["dim", "--grid", "2x2"])
    assert code == 0
    assert stdout.splitlines()[0] == "6"
    assert stdout.splitlines()[1:] == ["1", "X11", "X12", "X21", "X22", "det{1,2|1,2}"]


def test_dim_table_tsv(capsys):
    code, stdout, _ = out(capsys, ["dim", "--grid", "2x3", "--table", "--oracle"])
    assert code == 0
    assert stdout.splitlines()[-1] == "2\t3\t10\t10"


def test_nf_example(capsys):
    code, stdout, _ = out(capsys, ["nf", "--grid", "2x2", "--expr", "X12*X21"])
    assert (code, stdout.strip()) == (0, "-X11*X22")


def test_nf_output_round_trips(capsys):
    expr = "a1*X12*X21 + 1/2*X13*X22*X31 - 3*X21 + 7"
    code, stdout, _ = out(capsys, ["nf", "--grid", "3x3", "--expr", expr])
    assert code == 0
    printed = parse_polynomial(stdout.strip())
    code, again, _ = out(capsys, ["nf", "--grid", "3x3", "--expr", stdout.strip()])
    assert again.strip() == stdout.strip() == str(printed)


def test_nf_special_ideal(capsys):
    code, stdout, _ = out(capsys, ["nf", "--grid", "2x2", "--ideal", "special", "--expr", "X11^2 + X12*X21 + X11*X22"])
    assert code == 0 and stdout.strip() == "X11^2"


def test_det_example(capsys, special_file):
    code, stdout, _ = out(capsys, ["det", "--in", special_file])
    assert code == 0
    assert stdout.splitlines() == ["det 2", "2!*tr_m 2", "equal: true"]
    code, stdout, _ = out(capsys, ["det", "--in", special_file, "--json"])
    assert json.loads(stdout) == {"det": "2", "n_factorial_trm": "2", "equal": True}


@pytest.mark.parametrize("pred, expected", [("special", "true"), ("dtilde", "false"), ("simplex", "false")])
def test_check(capsys, special_file, pred, expected):
    code, stdout, _ = out(capsys, ["check", "--pred", pred, "--in", special_file])
    assert (code, stdout.strip()) == (0, expected)


def test_check_d_vector(capsys, tmp_path):
    path = tmp_path / "v.json"
    path.write_text(json.dumps({"ring": "nil:Q:2", "rows": 1, "cols": 2, "entries": [["e1", "3*e2"]]}))
    code, stdout, _ = out(capsys, ["check", "--pred", "d", "--in", str(path), "--json"])
    assert code == 0 and json.loads(stdout)["result"] is True


def test_basis_listing(capsys):
    code, stdout, _ = out(capsys, ["basis", "--grid", "2x2"])
    assert code == 0
    assert stdout.splitlines()[-1] == "2\tdet{1,2|1,2}\tX11*X22"


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["dim", "--grid", "2by2"], "--grid"),
        (["dim", "--grid", "9x9"], "cap"),
        (["nf", "--grid", "2x2", "--expr", "X11 +"], "--expr"),
        (["nf", "--grid", "2x2", "--expr", "X31"], "outside"),
        (["det", "--in", "/nonexistent.json"], "--in"),
        (["verify", "--prop", "P42"], "--prop"),
        (["verify", "--cases", "-5"], "--cases"),
    ],
)
def test_validation_errors_exit_2(capsys, argv, flag):
    code, _, err = out(capsys, argv)
    assert code == 2
    assert flag in err


def test_unknown_flag_is_an_error(capsys):
    with pytest.raises(SystemExit) as info:
        run(["dim", "--grid", "2x2", "--frobnicate"])
    assert info.value.code == 2


def test_bad_ring_in_matrix_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"ring": "Zmod:8", "entries": [["1"]]}))
    code, _, err = out(capsys, ["det", "--in", str(path)])
    assert code == 2 and "--in" in err


def test_verify_pass_and_fail_exit_codes(capsys):
    code, stdout, _ = out(capsys, ["verify", "--prop", "P6-IdealProperty", "--cases", "20", "--json"])
    assert code == 0
    lines = [json.loads(line) for line in stdout.splitlines()]
    assert [r["mode"] for r in lines] == ["randomized", "symbolic"]
    code, stdout, _ = out(capsys, ["verify", "--prop", "P6-IdealProperty", "--cases", "20", "--mutate"])
    assert code == 1 and "fail" in stdout


def test_verify_output_byte_identical(capsys):
    argv = ["verify", "--prop", "all", "--mode", "randomized", "--cases", "5", "--seed", "17", "--json"]
    _, first, _ = out(capsys, argv)
    _, second, _ = out(capsys, argv)
    assert first == second and len(first.splitlines()) == 14


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nilmat", "dim", "--grid", "1x3"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "4"

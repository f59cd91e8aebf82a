import json
import subprocess
import sys

from uncoiledtl.cli import run


def capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, out


def test_dims_command(capsys):
    code, out = capture(capsys, ["dims", "--algebra", "uatl", "--n", "5",
                                 "--enumerate"])
    assert code == 0
    doc = json.loads(out)
    row = doc["results"][0]
    assert row == {"n": 5, "closed_form": 180, "enumerated": 180,
                   "match": True}


def test_dims_sweep(capsys):
    code, out = capture(capsys, ["dims", "--algebra", "uptl1", "--max-n", "6",
                                 "--enumerate"])
    assert code == 0
    doc = json.loads(out)
    assert [r["n"] for r in doc["results"]] == [2, 4, 6]
    assert all(r["match"] for r in doc["results"])


def test_dims_infinite_algebra_invalid(capsys):
    code = run(["dims", "--algebra", "atl", "--n", "4"])
    assert code == 3


def test_basis_art(capsys):
    code, out = capture(capsys, ["basis", "--algebra", "uptl1", "--n", "2",
                                 "--format", "art"])
    assert code == 0
    assert "|" in out or "<" in out


def test_gamma_both_methods(capsys):
    code, out = capture(capsys, ["gamma", "--algebra", "uatl", "--n", "9",
                                 "--r", "2", "--seed", "3",
                                 "--method", "both"])
    assert code == 0
    doc = json.loads(out)
    assert doc["match"] is True
    assert all(d["value"] == "0" for d in doc["diff"])


def test_projector_certificate(capsys):
    code, out = capture(capsys, ["projector", "--algebra", "uptl1", "--n",
                                 "2", "--verify", "--oracle", "--seed", "7"])
    assert code == 0
    doc = json.loads(out)
    assert doc["verified"] is True
    # the displayed Q_2 coefficient beta/(alpha^2 - beta^2) at this env
    from fractions import Fraction
    from uncoiledtl.scalars import sample_env
    env = sample_env(7, "upTL1", 2)
    beta = env.beta
    want = beta / (env.alpha ** 2 - beta ** 2)
    entry = [e for e in doc["gamma_table"]["entries"] if e["k"] == 1][0]
    num, den = entry["value"].split("/")
    assert Fraction(int(num), int(den)) == want


def test_byte_identical_reruns(capsys):
    args = ["gamma", "--algebra", "uptl2", "--n", "6", "--seed", "5",
            "--method", "solver"]
    _, out1 = capture(capsys, args)
    _, out2 = capture(capsys, args)
    assert out1 == out2


def test_explicit_parameters(capsys):
    code, out = capture(capsys, ["gamma", "--algebra", "uptl2", "--n", "4",
                                 "--q-half", "3/2", "--gamma", "5/7",
                                 "--method", "both"])
    assert code == 0
    doc = json.loads(out)
    assert doc["env"]["s"] == "3/2" and doc["env"]["gamma"] == "5/7"
    assert doc["match"] is True


def test_nongeneric_exit_code(capsys):
    code = run(["gamma", "--algebra", "uptl2", "--n", "4",
                "--q-half", "1/1", "--method", "solver"])
    assert code == 2


def test_invalid_flags_exit_code():
    assert run(["dims", "--algebra", "nosuch", "--n", "3"]) == 3
    assert run(["gamma", "--algebra", "uatl", "--n", "4",
                "--method", "solver"]) == 3  # parity mismatch


def test_central_command(capsys):
    code, out = capture(capsys, ["central", "--n", "3", "--which", "F",
                                 "--seed", "4"])
    assert code == 0
    doc = json.loads(out)
    assert all(r["scalar_action"] for r in doc["results"])


def test_central_H_command(capsys):
    code, out = capture(capsys, ["central", "--n", "4", "--which", "H",
                                 "--k", "1/2", "--seed", "4"])
    assert code == 0
    doc = json.loads(out)
    assert all(r["scalar_action"] for r in doc["results"])


def test_selfcheck_ok_and_fault_injection(capsys, monkeypatch):
    code, out = capture(capsys, ["selfcheck", "--max-n", "3"])
    assert code == 0
    assert json.loads(out)["passed"] is True
    monkeypatch.setenv("UTL_FAULT_INJECT", "gamma")
    code, out = capture(capsys, ["selfcheck", "--max-n", "3"])
    assert code == 1
    doc = json.loads(out)
    assert not doc["passed"]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "uncoiledtl.cli", "dims", "--algebra",
         "uatl2", "--n", "4", "--enumerate"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"][0]["match"] is True

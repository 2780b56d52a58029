from __future__ import annotations

import json

import pytest

from heisquartic import acceptance, cli, thetanum


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_chern_table_csv(capsys):
    code, out, _ = run(capsys, "chern-table", "--gmin", "3", "--gmax", "8", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["g,c_g(Q1)", "3,32", "4,384", "5,4096", "6,56320", "7,872448", "8,15368192"]


def test_euler(capsys):
    code, out, _ = run(capsys, "euler", "--g", "4", "--d", "2")
    assert code == 0 and "sub: 11" in out and "routes agree" in out
    code, out, _ = run(capsys, "euler", "--g", "4", "--d", "2", "--route", "res", "--format", "json")
    assert json.loads(out)["values"] == {"res": 11}


def test_ranks(capsys):
    code, out, _ = run(capsys, "ranks", "--g", "4", "--d", "1", "--format", "json")
    payload = json.loads(out)
    assert code == 0 and payload["ranks"] == [{"d": 1, "rankQ": 5, "rankN": 11, "defect": 3}]


def test_verlinde(capsys):
    assert run(capsys, "verlinde", "--g", "4", "--k", "3")[:2] == (0, "800\n")


def test_dims_json(capsys, tmp_path):
    path = tmp_path / "dims.json"
    code, out, _ = run(capsys, "dims", "--g", "4", "--format", "json", "--json", str(path))
    payload = json.loads(out)
    assert code == 0 and payload["schema"] == "1" and payload["g"] == 4
    assert payload["symCube"] == 816 and payload["verlinde3"] == 800 and payload["kInvCubics"] == 51
    assert json.loads(path.read_text()) == payload


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "--g", "2", "--format", "json")
    payload = json.loads(out)
    assert code == 0 and payload["count"] == 5
    assert payload["basis"][-1]["label"] == {"type": "QLam", "data": [1, 2, 3]}


def test_restrict_lemma(capsys):
    assert run(capsys, "restrict-lemma", "--g", "4")[:2] == (0, "injective, rank 51/51\n")


def test_coble_deterministic(capsys, tmp_path):
    code, first, _ = run(capsys, "coble", "--seed", "7", "--format", "json")
    _, second, _ = run(capsys, "coble", "--seed", "7", "--format", "json")
    assert code == 0 and first == second
    payload = json.loads(first)
    assert len(payload["coefficients"]) == 15
    assert payload["residuals"]["gradient"] < 1e-8
    assert len(payload["singularValues"]) == 15


def test_kummer_quartic(capsys):
    code, out, _ = run(capsys, "kummer-quartic", "--seed", "3", "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 6


def test_usage_errors(capsys):
    assert run(capsys, "chern-table", "--bogus")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "euler", "--g", "3")[0] == 1
    assert run(capsys, "coble", "--seed", str(2**64))[0] == 1
    assert run(capsys, "verlinde", "--g", "1", "--k", "2")[0] == 1


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


def test_indeterminacy_exit_code(capsys):
    assert run(capsys, "coble", "--seed", "1", "--rank-tol", "1e-30")[0] == 3
    assert run(capsys, "coble", "--seed", "1", "--tol", "1e-300")[0] == 3


def test_failed_check_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli.series, "euler_char_residue", lambda g, d: -1)
    code, out, _ = run(capsys, "euler", "--g", "4", "--d", "2")
    assert code == 2 and "MISMATCH" in out


def test_selftest_reports_every_criterion(capsys, monkeypatch):
    fake = [acceptance.CriterionResult(n, f"c{n}", n != 3, "x") for n in range(1, 11)]
    monkeypatch.setattr(cli.acceptance, "run_all", lambda: fake)
    code, out, _ = run(capsys, "selftest")
    assert code == 2 and len(out.splitlines()) == 10 and "[FAIL]  3." in out
    monkeypatch.setattr(cli.acceptance, "run_all", lambda: [r for r in fake if r.passed])
    assert run(capsys, "selftest")[0] == 0

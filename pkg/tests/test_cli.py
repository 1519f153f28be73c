import json
import subprocess
import sys

import pytest

from extactic.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


def test_extactic_weighted_field(capsys):
    code, body = call(capsys, "extactic", "--field", "x;2*y", "--n", "1")
    assert code == 0
    assert body["schema"] == 1 and body["ok"]
    res = body["result"]
    assert res["affine_part"] == "x*y"
    assert res["infinity_multiplicity"] == 1
    assert res["total_degree"] == 3


def test_extactic_chart_check(capsys):
    code, body = call(capsys, "extactic", "--field", "x;2*y", "--n", "1", "--chart-check")
    assert code == 0
    assert body["result"]["infinity_source"] == "chart"


def test_degree_formula(capsys):
    code, body = call(capsys, "degree-formula", "--n", "1", "--d", "2", "--r", "2")
    assert code == 0 and body["result"]["degree"] == 12


def test_web_extactic_and_discriminant(capsys):
    code, body = call(capsys, "web-extactic", "--slope", "y*m^2-1", "--n", "1")
    assert code == 0
    assert body["result"]["total_degree"] == 7
    assert body["result"]["pole_order"] == 1
    code, body = call(capsys, "discriminant", "--slope", "y*m^2-1")
    assert body["result"]["discriminant"] == "y"


def test_surface_discriminant(capsys):
    code, body = call(capsys, "discriminant", "--surface", "x0^3+x1^3+x2^3+x3^3")
    assert code == 0
    assert body["result"]["discriminant"] == "x0*x1*x2*x3"
    assert body["result"]["hessian_ratio"] == "1/1296"


def test_invariant_curves(capsys):
    code, body = call(capsys, "invariant-curves", "--field", "x;2*y", "--n", "1")
    assert code == 0
    assert sorted(c["curve"] for c in body["result"]["curves"]) == ["x", "y"]


def test_declared_degree_mismatch(capsys):
    code, body = call(capsys, "extactic", "--field", "x;2*y", "--n", "1", "--r", "3")
    assert code == 2 and body["error"] == "input"


def test_lines_and_flecnodal(capsys):
    code, body = call(capsys, "lines", "--surface", "x0^3+x1^3+x2^3+x3^3")
    assert code == 0 and body["result"]["count"] == 27
    assert all(len(L["pluecker"]) == 6 for L in body["result"]["lines"])
    code, body = call(capsys, "lines", "--surface", "x0*x3-x1*x2")
    assert code == 0 and body["result"]["infinite_family"]
    code, body = call(capsys, "flecnodal", "--surface", "x0^3+x1^3+x2^3+x3^3")
    assert body["result"]["degree"] == 9 and body["result"]["salmon_bound"] == 27


def test_involutive_and_tangency(capsys):
    code, body = call(capsys, "involutive", "--surface", "x0^3-x1^3+x2^3-x3^3", "--sigma", "standard")
    assert code == 0
    assert 9 <= body["result"]["count"] <= body["result"]["bound"] == 15
    code, body = call(capsys, "tangency", "--surface", "x0^3-x1^3+x2^3-x3^3")
    assert body["result"]["degree"] == 5


def test_chern_rams_jets(capsys):
    code, body = call(capsys, "chern", "--d", "3", "--m", "1")
    assert body["result"]["contact_zero_length"] == "15" and body["result"]["disjoint_bound"] == 5
    code, body = call(capsys, "rams", "--d", "6")
    assert code == 0
    assert body["result"]["count"] == 26 == body["result"]["disjoint_bound"]
    code, body = call(capsys, "jet-rank", "--k", "2", "--m", "3")
    assert body["result"]["rank"] == 8


def test_text_format(capsys):
    code = run(["degree-formula", "--n", "2", "--d", "1", "--r", "1", "--format", "text"])
    out = capsys.readouterr().out
    assert code == 0
    assert "schema: 1" in out and '"degree": 12' in out


@pytest.mark.parametrize(
    "argv",
    [
        ["lines", "--surface", "x0^3+"],
        ["chern", "--d", "2", "--m", "1"],
        ["bogus"],
        [],
        ["degree-formula", "--n", "1"],
        ["involutive", "--surface", "x0^3+x1^3+x2^3+x3^3", "--sigma", "[[0,1],[1,0]]"],
        ["extactic", "--field", "x", "--n", "1"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, body = call(capsys, *argv)
    assert code == 2
    assert body["ok"] is False and body["schema"] == 1


def test_invariant_violation_exit_3(capsys, monkeypatch):
    from extactic import contact
    from extactic.errors import InvariantViolation

    def broken(k, m):
        raise InvariantViolation("forced")

    monkeypatch.setattr(contact, "jet_rank_series", broken)
    code, body = call(capsys, "jet-rank", "--k", "2", "--m", "3")
    assert code == 3 and body["error"] == "invariant"


def test_falsified_claim_exit_4(capsys, monkeypatch):
    from extactic import contact
    from extactic.errors import ClaimFalsified

    def broken(d, m):
        raise ClaimFalsified("forced")

    monkeypatch.setattr(contact, "contact_zero_length", broken)
    code, body = call(capsys, "chern", "--d", "3", "--m", "1")
    assert code == 4 and body["error"] == "falsified"


def test_deterministic_output(capsys):
    argv = ["web-extactic", "--slope", "y*m^2-1", "--n", "1", "--seed", "7", "--chart-check"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    assert capsys.readouterr().out == first


def test_corpus_subset(capsys):
    code, body = call(capsys, "corpus", "--only", "9,11")
    assert code == 0
    assert [c["criterion"] for c in body["result"]["criteria"]] == [9, 11]
    assert body["result"]["failed"] == 0


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "extactic.cli", "degree-formula", "--n", "1", "--d", "1", "--r", "4"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["degree"] == 12

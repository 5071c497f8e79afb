import csv
import io
import json

import numpy as np
import pytest

from cbspread import dominant_eigenpair, game_scalars, krackhardt_network
from cbspread.cases import CASES
from cbspread.cli import dump_json, main
from cbspread.game import georgia_shift_condition
from cbspread.scenario_io import load_scenario, scenario_from_dict
from cbspread.errors import ValidationError
from importlib import resources

SCEN = resources.files("cbspread").joinpath("data/scenarios")


def scen(name):
    return str(SCEN.joinpath(f"case_{name.lower()}.json"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_doc(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_check_case_b(capsys, kk):
    code, out, _ = run(capsys, "check", "--scenario", scen("B"))
    assert code == 0
    gs = game_scalars(CASES["B"].scenario(kk), dominant_eigenpair(kk))
    assert f"lambda       {gs.lam:.6g}" in out
    assert f"s_hat        {gs.s_hat:.6g}" in out
    assert f"chi          {gs.chi:.6g}" in out
    assert abs(gs.lam - 0.2369) <= 5e-4
    assert "overall      ok" in out


def test_check_beta_below_gamma(capsys, tmp_path):
    doc = json.loads(open(scen("B")).read())
    doc.update(beta=0.03, gamma=0.06)
    doc["network"]["edge_list"] = str(SCEN.joinpath("../krackhardt_advice.txt"))
    code, out, _ = run(capsys, "check", "--scenario", write_doc(tmp_path, doc))
    assert code == 2
    assert "beta >= gamma >= 0 violated" in out


def test_check_norm_too_large(capsys, tmp_path):
    doc = {"network": {"n": 2, "edges": [[0, 1, 0.95], [1, 0, 0.95]]},
           "s": [0.3, 0.6], "beta": 0.06, "gamma": 0.0}
    code, out, _ = run(capsys, "check", "--scenario", write_doc(tmp_path, doc))
    assert code == 2
    assert "1 - max(||W||_inf, ||W||_1) >= max(2 beta, 4 gamma) violated" in out


@pytest.mark.parametrize("name, text", [
    ("C", "(g*, h*) = (0, 0.85"),
    ("D", "(g*, h*) = (0.2, 1), branch MsLow1NonPos"),
    ("A", "(g*, h*) = (0, 1), branch NoCB"),
])
def test_equilibrium_output(capsys, name, text):
    code, out, _ = run(capsys, "equilibrium", "--scenario", scen(name))
    assert code == 0 and text in out
    if name == "C":
        assert "branch M01NonNeg_Interior_r0" in out


def test_equilibrium_verify(capsys):
    code, out, _ = run(capsys, "equilibrium", "--scenario", scen("E"), "--verify", "--grid", "200",
                       "--seed", "7")
    assert code == 0
    assert "verification: agree" in out and "seed 7" in out


def test_equilibrium_refuses_bad_assumption(capsys, tmp_path):
    doc = {"network": {"n": 2, "edges": [[0, 1, 0.9], [1, 0, 0.9]]},
           "s": [0.3, 0.6], "beta": 0.06, "gamma": 0.0}
    code, _, err = run(capsys, "equilibrium", "--scenario", write_doc(tmp_path, doc))
    assert code == 2 and "violated" in err


def test_json_round_trip(capsys):
    code, out, _ = run(capsys, "equilibrium", "--scenario", scen("C"), "--json", "--verify",
                       "--grid", "50")
    assert code == 0
    assert dump_json(json.loads(out)) + "\n" == out
    doc = json.loads(out)
    assert doc["branch"] == "M01NonNeg_Interior_r0"
    # full precision, not the 6-digit human rendering
    assert len(repr(doc["h_star"])) > 8


def test_simulate_case_b(capsys, kk):
    code, out, _ = run(capsys, "simulate", "--scenario", scen("B"), "--g", "0", "--h", "0.75",
                       "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["iterations"] > 0 and doc["max_abs_gap"] <= 1e-8
    code, out, _ = run(capsys, "simulate", "--scenario", scen("B"), "--g", "0", "--h", "0.75")
    assert "converged in" in out and "iterations" in out


def test_simulate_trace(capsys, tmp_path):
    path = tmp_path / "trace.csv"
    code, _, _ = run(capsys, "simulate", "--scenario", scen("B"), "--g", "0", "--h", "0.75",
                     "--trace", str(path))
    assert code == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["k"] + [f"x_{i}" for i in range(21)]
    assert rows[1][0] == "0" and float(rows[1][1]) == 0.2
    code, out, _ = run(capsys, "simulate", "--scenario", scen("B"), "--g", "0", "--h", "0.75",
                       "--trace", "-")
    assert out.splitlines()[0].startswith("k,x_0,x_1")


def test_simulate_infeasible_pair(capsys):
    code, _, err = run(capsys, "simulate", "--scenario", scen("B"), "--g", "0", "--h", "0.5")
    assert code == 2 and "h >= s_max" in err


def test_simulate_iteration_limit_exit_code(capsys):
    code, _, err = run(capsys, "simulate", "--scenario", scen("B"), "--g", "0", "--h", "0.75",
                       "--max-iter", "2")
    assert code == 3 and "residual" in err


def _read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=float)


def test_sweep_surface_case_b(capsys):
    code, out, _ = run(capsys, "sweep", "--scenario", scen("B"), "--grid", "101")
    assert code == 0
    header, data = _read_csv(out)
    assert header == ["g", "h", "f"]
    assert data.shape == (101 * 101, 3)
    at_zero = data[data[:, 0] == 0.0]
    assert at_zero[np.argmax(at_zero[:, 2]), 1] == pytest.approx(0.75, abs=2.5e-3)


@pytest.mark.parametrize("name", ["B", "C", "E"])
def test_sweep_predicate_matches_chain(capsys, kk, name):
    code, out, _ = run(capsys, "sweep", "--scenario", scen(name), "--axes", "bg", "--mode", "m01",
                       "--grid", "41", "--beta-range", "0.001:0.38", "--gamma-range", "0.001:0.19")
    assert code == 0
    header, data = _read_csv(out)
    assert header == ["beta", "gamma", "m01"]
    scn = CASES[name].scenario(kk)
    gs = game_scalars(scn, dominant_eigenpair(kk))
    compared = 0
    for beta, gamma, m01 in data:
        if gamma > beta or abs(m01) < 1e-12:
            continue
        bias = scn.with_bias(beta, gamma).bias
        assert georgia_shift_condition(gs, bias) == (m01 < 0)
        compared += 1
    assert compared > 500


def test_sweep_q01_header(capsys):
    code, out, _ = run(capsys, "sweep", "--scenario", scen("C"), "--axes", "bg", "--mode", "q01",
                       "--grid", "3")
    assert code == 0 and out.splitlines()[0] == "beta,gamma,q01"


@pytest.mark.parametrize("argv", [
    ["--g-range", "0.1:0.1"],
    ["--axes", "bg", "--mode", "m01", "--gamma-range", "0.05:0.05"],
    ["--grid", "1"],
])
def test_sweep_degenerate_range(capsys, argv):
    code, _, err = run(capsys, "sweep", "--scenario", scen("B"), *argv)
    assert code == 2 and err


def test_reproduce_reports_each_case(capsys):
    code, out, _ = run(capsys, "reproduce")
    assert out.startswith("lambda = ")
    for name in CASES:
        assert f"case {name}:" in out
    # exit status follows the table: 0 only if every case passed
    assert (code == 0) == ("5/5 cases pass" in out)
    assert code in (0, 4)


def test_reproduce_json(capsys):
    code, out, _ = run(capsys, "reproduce", "--json")
    doc = json.loads(out)
    assert set(doc["cases"]) == set(CASES)
    assert doc["lambda"]["pass"] is True
    assert dump_json(doc) + "\n" == out
    assert (code == 0) == doc["pass"]


def test_reproduce_corrupted_fixture(capsys, tmp_path):
    src = resources.files("cbspread").joinpath("data/krackhardt_advice.txt").read_text()
    lines = [ln for ln in src.splitlines() if ln and not ln.startswith("#")]
    bad = tmp_path / "bad.txt"
    bad.write_text("\n".join(ln for i, ln in enumerate(lines) if i % 7) + "\n")
    code, out, _ = run(capsys, "reproduce", "--fixture", str(bad))
    assert code == 4
    assert "FAIL" in out.splitlines()[0] and "lambda mismatch" in out


def test_reproduce_missing_fixture(capsys, tmp_path):
    code, _, err = run(capsys, "reproduce", "--fixture", str(tmp_path / "none.txt"))
    assert code == 2 and "not found" in err


# -- scenario documents ------------------------------------------------------

def test_scenario_shorthand_matches_case():
    scn = load_scenario(scen("C"))
    assert np.array_equal(scn.s, CASES["C"].opinions())
    assert scn.bias.beta == 0.06


@pytest.mark.parametrize("doc, field", [
    ({"s": [0.5], "beta": 0.1, "gamma": 0.0}, "network: missing"),
    ({"network": {"n": 2, "edges": [[0, 1, 0.2]]}, "s": [0.5], "beta": 0.1, "gamma": 0}, "s: expected 2"),
    ({"network": {"n": 2, "edges": [[0, 1, 0.2]]}, "s": {"overrides": {}}, "beta": 0.1, "gamma": 0}, "s: shorthand"),
    ({"network": {"n": 2, "edges": [[0, 1, 0.2]]}, "s": {"default": 0.2, "overrides": {"5": 0.1}},
      "beta": 0.1, "gamma": 0}, "s.overrides"),
    ({"network": {"n": 2, "edges": [[0, 1, 0.2]]}, "s": [0.2, 1.4], "beta": 0.1, "gamma": 0}, r"s: .*\[0, 1\]"),
    ({"network": {"n": 2, "edges": [[0, 1]]}, "s": [0.2, 0.4], "beta": 0.1, "gamma": 0}, "krackhardt_weights"),
    ({"network": {"edge_list": "missing.txt"}, "s": [0.2], "beta": 0.1, "gamma": 0}, "network.edge_list"),
    ({"network": {"n": 2, "edges": [[0, 1, 0.2]]}, "s": [0.2, 0.4], "beta": "x", "gamma": 0}, "beta/gamma"),
    ({"network": {"n": 2, "edges": [[0, 1, 0.2]]}, "s": [0.2, 0.4], "beta": 0.1, "gamma": -1}, "gamma"),
])
def test_scenario_field_errors(doc, field):
    with pytest.raises(ValidationError, match=field):
        scenario_from_dict(doc)


def test_scenario_edge_list_relative_to_document(tmp_path, capsys):
    (tmp_path / "net.txt").write_text("0 1 0.2\n1 0 0.3\n")
    path = write_doc(tmp_path, {"network": {"edge_list": "net.txt"}, "s": [0.2, 0.6],
                                "beta": 0.1, "gamma": 0.05})
    scn = load_scenario(path)
    assert scn.net.W[1, 0] == 0.3
    code, out, _ = run(capsys, "equilibrium", "--scenario", path)
    assert code == 0


def test_invalid_json_exit_code(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = run(capsys, "check", "--scenario", str(p))
    assert code == 2 and "not valid JSON" in err


def test_deterministic_output(capsys):
    a = run(capsys, "equilibrium", "--scenario", scen("E"), "--json", "--verify", "--grid", "60")
    b = run(capsys, "equilibrium", "--scenario", scen("E"), "--json", "--verify", "--grid", "60")
    assert a == b

import json
from fractions import Fraction as F

import pytest
from click.testing import CliRunner

from symlab.cli import EXIT_INCONSISTENT, RunConfig, cli, run
from symlab.errors import SolverInconsistency
from symlab.skorokhod import SimConfig

FAST = ["--paths", "200", "--dt", "1e-3"]


def invoke(*args, env=None):
    return CliRunner().invoke(cli, list(args), env=env)


def test_solve_three_tenths():
    res = invoke("solve", "--p", "3/10", "--grid-step", "1/20", "--grid", "-2..1")
    assert res.exit_code == 0, res.output
    doc = json.loads(res.output)
    assert doc["schema"] == 1
    assert doc["variance"] == pytest.approx(0.21, abs=1e-7)
    assert doc["grid"]["size"] == 61


def test_solve_half():
    doc = json.loads(invoke("solve", "--p", "1/2", "--grid-step", "1/20", "--grid", "-2..1").output)
    assert doc["variance"] == pytest.approx(0.0, abs=1e-9)
    assert doc["y_atoms"] == [{"num": -1, "den": 2, "prob": 1.0}]


def test_certify():
    res = invoke("certify", "--p", "3/10")
    doc = json.loads(res.output)
    assert doc["bound"] == pytest.approx(0.21, abs=1e-15)
    assert doc["bound_applies"] is True
    assert doc["report"]["max_reflection_violation"] <= 1e-12


def test_verify_rho_is_flat():
    doc = json.loads(invoke("verify-rho", "--p", "3/10", "--samples", "100").output)
    assert doc["samples_checked"] == 100
    assert doc["max_oddness_violation"] <= 1e-12


def test_embed():
    doc = json.loads(invoke("embed", "--p", "3/10", "--paths", "1000", "--seed", "3").output)
    assert doc["mean_tau"] == pytest.approx(0.21, abs=1e-12)
    assert [a["value"] for a in doc["empirical_dist"]] == [-0.7, 0.3]


def test_ito_fast():
    doc = json.loads(invoke("ito", "--p", "3/10", *FAST).output)
    assert doc["n_paths_used"] == 200
    assert "conditioning" in doc
    assert doc["valid"] is True


def test_all_headline_and_bound():
    for p in ("3/10", "1/2", "9/10"):
        res = invoke("all", "--p", p, *FAST)
        assert res.exit_code == 0, res.output
        head = json.loads(res.output)["headline"]
        assert head["lp_variance"] >= head["certificate_bound"] - 1e-7
    head = json.loads(invoke("all", "--p", "3/10", *FAST).output)["headline"]
    assert head["simulated_e_tau"] == pytest.approx(0.21, abs=1e-12)


def test_byte_identical_output():
    first = invoke("all", "--p", "3/10", "--seed", "7", *FAST).output
    second = invoke("all", "--p", "3/10", "--seed", "7", *FAST).output
    assert first == second


def test_seed_from_environment():
    a = invoke("ito", "--p", "3/10", *FAST, env={"SYMLAB_SEED": "5"}).output
    b = invoke("ito", "--p", "3/10", "--seed", "5", *FAST).output
    c = invoke("ito", "--p", "3/10", "--seed", "6", *FAST).output
    assert a == b != c


def test_table_output():
    res = invoke("solve", "--p", "3/10", "--output", "table")
    assert res.exit_code == 0
    assert any(line.startswith("variance") for line in res.output.splitlines())


def test_infeasible_exit_code():
    res = invoke("solve", "--p", "3/10", "--grid", "1..2")
    assert res.exit_code == 3
    assert json.loads(res.output)["status"] == "Infeasible"


@pytest.mark.parametrize(
    "args",
    [
        ["solve", "--p", "0.3x"],
        ["solve", "--p", "3/2"],
        ["solve", "--p", "0"],
        ["solve", "--p", "3/10", "--grid", "1..-1"],
        ["solve", "--p", "3/10", "--grid", "nope"],
        ["solve", "--p", "3/10", "--grid-step", "-1/20"],
        ["ito", "--p", "3/10", "--dt", "0.5"],
        ["solve"],
        ["frobnicate"],
    ],
)
def test_invalid_config_exit_2(args):
    assert invoke(*args).exit_code == 2


def test_solver_inconsistency_exit_code(monkeypatch):
    def broken(_prob):
        raise SolverInconsistency("forced")

    monkeypatch.setattr("symlab.cli.solve_symmetrizer", broken)
    assert invoke("solve", "--p", "3/10").exit_code == EXIT_INCONSISTENT


def test_run_api():
    code, doc = run(RunConfig(command="certify", p=F(9, 10), sim=SimConfig(n_paths=10)))
    assert code == 0
    assert doc["bound"] == pytest.approx(0.09, abs=1e-15)

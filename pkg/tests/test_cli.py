import json

import pytest

from conftest import WORKED_COST
from monge_domp.cli import main
from monge_domp.harness import CSV_HEADER


def write_json(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def worked_tp(tmp_path):
    return write_json(tmp_path, "tp.json", {"p": 2, "q": 2, "s": [3, 2], "d": [2, 3],
                                            "cost_scaled": [100, 200, 200, 300]})


@pytest.fixture
def worked_domp(tmp_path):
    flat = [100 * x for row in WORKED_COST for x in row]
    return write_json(tmp_path, "domp.json", {"n": 3, "p": 1, "cost_scaled": flat,
                                              "lambda": [-1, -1, -1], "meta": {}})


def test_solve_tp_prints_formula_duals(worked_tp, capsys):
    assert main(["solve-tp", worked_tp, "--duals", "formula-row"]) == 0
    out = capsys.readouterr().out
    assert "path: (1,1) (1,2) (2,2)" in out
    assert "moves: right down" in out
    assert "objective 10.00" in out
    assert "u=(0.00,1.00) v=(1.00,2.00)" in out
    assert "dual objective 10.00" in out


@pytest.mark.parametrize("route", ["backward", "forward", "formula-col"])
def test_solve_tp_all_dual_routes_check(worked_tp, route, capsys):
    assert main(["solve-tp", worked_tp, "--duals", route, "--check"]) == 0
    assert "check passed" in capsys.readouterr().out


def test_solve_tp_non_monge_warns(tmp_path, capsys):
    path = write_json(tmp_path, "bad.json", {"p": 2, "q": 2, "s": [1, 1], "d": [1, 1],
                                             "cost_scaled": [[100, 0], [0, 100]]})
    assert main(["solve-tp", path, "--check"]) == 0
    assert "not Monge" in capsys.readouterr().err


def test_solve_tp_error_codes(tmp_path):
    unbalanced = write_json(tmp_path, "u.json", {"p": 1, "q": 1, "s": [1], "d": [2], "cost_scaled": [1]})
    assert main(["solve-tp", unbalanced]) == 3
    garbage = tmp_path / "g.json"
    garbage.write_text("{not json")
    assert main(["solve-tp", str(garbage)]) == 2
    short = write_json(tmp_path, "s.json", {"p": 2, "q": 2, "s": [1, 1], "d": [1, 1], "cost_scaled": [1]})
    assert main(["solve-tp", short]) == 2
    assert main(["solve-tp", str(tmp_path / "missing.json")]) == 2


@pytest.mark.parametrize("method", ["benders-b1", "benders-b2", "enum"])
def test_solve_domp_worked_median(worked_domp, method, capsys):
    assert main(["solve-domp", "--input", worked_domp, "--method", method, "--verify"]) == 0
    out = capsys.readouterr().out
    assert "value -14.00" in out
    assert "Y {3}" in out
    assert "verify passed" in out


def test_solve_domp_generated_and_trivial(capsys):
    assert main(["solve-domp", "--n", "8", "--p", "3", "--family", "krange", "--epsilon", "0", "--verify"]) == 0
    assert "gap 0.000000" in capsys.readouterr().out
    assert main(["solve-domp", "--n", "5", "--p", "5", "--verify"]) == 0
    assert "Y {1,2,3,4,5}" in capsys.readouterr().out


def test_solve_domp_limits_and_errors(monkeypatch, capsys):
    assert main(["solve-domp", "--n", "9", "--p", "4", "--max-iterations", "1"]) == 0
    assert "status limit" in capsys.readouterr().out
    assert main(["solve-domp"]) == 2
    assert main(["solve-domp", "--n", "4", "--epsilon", "0.001"]) == 2
    monkeypatch.setenv("MONGE_DOMP_ENUM_CAP", "3")
    assert main(["solve-domp", "--n", "6", "--p", "2"]) == 5


def test_gen_reverse_family(tmp_path, capsys):
    assert main(["gen", "--n", "6", "--seed", "1", "--family", "reverse"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["lambda"] == [6, 5, 4, 3, 2, 1] and doc["p"] == 1
    out = tmp_path / "inst.json"
    assert main(["gen", "--n", "6", "--family", "reverse", "--out", str(out)]) == 0
    assert json.loads(out.read_text()) == doc
    assert main(["gen", "--n", "3", "--p", "4"]) == 2


def test_gen_output_feeds_solve(tmp_path, capsys):
    out = tmp_path / "inst.json"
    main(["gen", "--n", "7", "--p", "2", "--seed", "4", "--family", "random", "--out", str(out)])
    assert main(["solve-domp", "--input", str(out), "--epsilon", "0", "--verify"]) == 0


def test_bench_empty_grid_and_small_grid(tmp_path, capsys):
    assert main(["bench", "--n", ""]) == 0
    assert capsys.readouterr().out == ",".join(CSV_HEADER) + "\n"
    out = tmp_path / "r.csv"
    assert main(["bench", "--n", "4", "--families", "median,kmin", "--seeds", "1", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 3 * 2 * 3
    assert main(["bench", "--n", "4", "--families", "bogus"]) == 2
    assert main(["bench", "--n", "4", "--methods", "simplex"]) == 2


def test_verify_suites(capsys):
    assert main(["verify", "--suite", "lemma8", "--max-n", "4", "--max-g", "4"]) == 0
    out = capsys.readouterr().out
    assert "lemma8" in out and "pass" in out
    assert main(["verify", "--samples", "50", "--max-n", "3", "--max-g", "3"]) == 0

import json

import pytest

from lmdist.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert not err, err
    return code, json.loads(out)


def test_distance_worked_example(capsys):
    code, body = run_json(
        capsys, "distance", "x1^2*x2*x3^2*x4", "x1*x2^2*x3*x5*x6",
        "--vars", "x1,x2,x3,x4,x5,x6",
    )
    assert code == 0
    assert body["result"]["distance_matrix"] == [[0, 3], [3, 0]]


def test_distance_three_monomials_symmetric(capsys):
    code, body = run_json(capsys, "distance", "x1", "x1*x2", "x2^3")
    m = body["result"]["distance_matrix"]
    assert code == 0
    assert len(m) == 3 and all(m[i][j] == m[j][i] for i in range(3) for j in range(3))
    assert m[0][0] == 0


def test_distance_parse_error_is_positional(capsys):
    code, out, err = run(capsys, "distance", "x1", "x9^2", "--vars", "x1")
    assert code == 2
    assert "monomial 1" in err


def test_nw_report(capsys):
    code, body = run_json(capsys, "nw", "--n", "5", "--k", "2")
    assert code == 0
    r = body["result"]
    assert r["count"] == 25
    assert r["min_pairwise_distance"] >= 1
    assert r["single_monomial_derivatives"] is True


def test_nw_rejects_composite(capsys):
    code, out, err = run(capsys, "nw", "--n", "4", "--k", "1")
    assert code == 2
    assert "not prime" in err


def test_imm_report(capsys):
    code, body = run_json(capsys, "imm", "--n", "3", "--d", "3")
    assert code == 0
    r = body["result"]
    assert r["count"] == 9 and r["multilinear_ok"] and r["value_at_ones"] == "9"


def test_imm_lm_report(capsys):
    code, body = run_json(capsys, "imm-lm", "--n", "8", "--k", "1")
    assert code == 0
    r = body["result"]
    assert r["count"] == 7 and r["prime"] == 7
    assert r["min_pairwise_distance"] >= 2
    assert r["max_deriv_set_overlap"] < 1


def test_union_bound_needs_seed(capsys, monkeypatch):
    monkeypatch.delenv("LMDIST_SEED", raising=False)
    code, out, err = run(capsys, "union-bound", "--trials", "5")
    assert code == 2
    assert "seed" in err


def test_union_bound_suite(capsys):
    code, body = run_json(capsys, "union-bound", "--trials", "20", "--seed", "7")
    assert code == 0
    assert body["result"]["failures"] == 0
    assert len(body["result"]["rows"]) == 20


def test_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv("LMDIST_SEED", "7")
    code, body = run_json(capsys, "union-bound", "--trials", "5")
    assert code == 0
    assert body["config"]["seed"] == 7


def test_span_and_circuit_suites(capsys):
    code, body = run_json(capsys, "span-bound", "--trials", "10", "--seed", "1")
    assert code == 0 and body["result"]["ok"]
    code, body = run_json(capsys, "circuit-bound", "--trials", "10", "--seed", "1")
    assert code == 0 and body["result"]["ok"]


def test_byte_identical_reruns(capsys, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["span-bound", "--trials", "8", "--seed", "42", "--out", str(out1)]) == 0
    assert main(["span-bound", "--trials", "8", "--seed", "42", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_csv_default(capsys):
    code, out, err = run(capsys, "sweep", "--preset", "nw", "--n-grid", "100,1000")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("preset,n,N,k,d,s,ell")
    assert len(lines) == 3


def test_sweep_empty_grid_header_only(capsys):
    code, out, err = run(capsys, "sweep", "--preset", "imm")
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 1 and lines[0].startswith("preset,")


def test_sweep_infeasible_rows_flagged(capsys):
    code, out, err = run(
        capsys, "sweep", "--preset", "custom", "--eps", "0.2", "--n-grid", "100",
    )
    assert code == 0
    row = out.strip().split("\n")[1].split(",")
    header = out.strip().split("\n")[0].split(",")
    assert row[header.index("feasible")] == "0"


def test_witness_verify(capsys):
    code, body = run_json(capsys, "witness", "--n", "2", "--d", "2", "--verify")
    assert code == 0
    assert body["result"]["report"]["rank_mod"] == 4


def test_witness_replay_identical_report(capsys, tmp_path):
    code, body = run_json(capsys, "witness", "--n", "4", "--d", "5", "--verify")
    assert code == 0
    wfile = tmp_path / "w.json"
    wfile.write_text(json.dumps(body["result"]["witness"]) + "\n")
    code2, body2 = run_json(capsys, "witness", "--replay", str(wfile))
    assert code2 == 0
    assert body2["result"]["report"] == body["result"]["report"]


def test_witness_exact_rank_flag(capsys):
    code, body = run_json(
        capsys, "witness", "--n", "3", "--d", "3", "--verify", "--exact-rank"
    )
    assert code == 0
    rep = body["result"]["report"]
    assert rep["rank_exact"] == rep["rank_mod"]


def test_witness_needs_dims(capsys):
    code, out, err = run(capsys, "witness", "--verify")
    assert code == 2 and "--n" in err

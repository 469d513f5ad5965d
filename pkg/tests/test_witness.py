import random

import pytest

from lmdist.budget import BudgetExceededError
from lmdist.families import ImmParams, imm_poly
from lmdist.witness import (
    HessianMatrix,
    WitnessPoint,
    canonical_singular_diag,
    construct_witness,
    det_hessian_at,
    imm_hessian_at,
    product_value,
    rank_exact_rational,
    rank_transfer_check,
    singular_diag_pattern_violations,
    verify_witness,
)
from oracles import det_poly, symbolic_second_derivatives


def random_point(n, d, rng):
    return {
        (t, i, j): rng.randint(-3, 3)
        for t in range(1, d + 1)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    }


# ---------------------------------------------------------------------------
# the closed-form Hessian


def test_two_matrix_block_is_kronecker():
    n = 3
    rng = random.Random(1)
    point = random_point(n, 2, rng)
    hess = imm_hessian_at(n, 2, point)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                for l in range(1, n + 1):
                    expected = 1 if (i == 1 and j == k and l == 1) else 0
                    assert hess.entry_by_label((1, i, j), (2, k, l)) == expected


def test_same_matrix_blocks_vanish():
    rng = random.Random(2)
    hess = imm_hessian_at(2, 3, random_point(2, 3, rng))
    for t in (1, 2, 3):
        for a in range(1, 3):
            for b in range(1, 3):
                for c in range(1, 3):
                    for e in range(1, 3):
                        assert hess.entry_by_label((t, a, b), (t, c, e)) == 0


def test_hessian_is_symmetric():
    rng = random.Random(3)
    hess = imm_hessian_at(3, 3, random_point(3, 3, rng))
    for (r, c), v in hess.entries.items():
        assert hess.entry(c, r) == v


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_closed_form_matches_symbolic_oracle(n, d):
    rng = random.Random(100 * n + d)
    point = random_point(n, d, rng)
    hess = imm_hessian_at(n, d, point)
    poly = imm_poly(ImmParams(n, d))
    table = poly.table
    eval_point = {
        table.id_of_label(lab): val for lab, val in point.items()
    }
    dense_oracle = symbolic_second_derivatives(poly, eval_point)
    dense = hess.to_dense()
    assert dense == dense_oracle


# ---------------------------------------------------------------------------
# witness construction


def test_witness_base_case_values():
    w = construct_witness(2, 2)
    assert product_value(2, 2, w.values) == 0
    assert w.values[(1, 1, 1)] == 0 and w.values[(1, 1, 2)] == 1
    assert w.values[(2, 1, 1)] == 1 and w.values[(2, 2, 1)] == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_two_matrix_rank_is_2n(n):
    report = verify_witness(n, 2, construct_witness(n, 2))
    assert report.rank_mod == 2 * n
    assert report.passed


def test_witness_3_4():
    report = verify_witness(3, 4, construct_witness(3, 4))
    assert report.zero_ok and report.prefix_ok
    assert report.rank_mod >= 4 * 2


def test_witness_rejects_tiny():
    with pytest.raises(ValueError):
        construct_witness(1, 2)
    with pytest.raises(ValueError):
        construct_witness(3, 1)


def test_tampered_base_fails_zero_check():
    w = construct_witness(3, 3)
    w.values[(1, 1, 1)] = 1  # breaks the zero structure
    report = verify_witness(3, 3, w)
    assert not report.zero_ok
    assert not report.passed


def test_witness_grid_small_with_exact_rank():
    for n in (2, 3, 4):
        for d in (2, 3, 4):
            report = verify_witness(n, d, construct_witness(n, d), exact_rank=True)
            assert report.passed, (n, d)
            assert report.rank_exact == report.rank_mod  # no modular collapse


def test_witness_rank_mod_never_exceeds_exact():
    rng = random.Random(8)
    for _ in range(5):
        n, d = rng.randint(2, 3), rng.randint(2, 3)
        point = random_point(n, d, rng)
        hess = imm_hessian_at(n, d, point)
        assert hess.rank_mod() <= hess.rank_exact()


def test_witness_serialization_round_trip(tmp_path):
    w = construct_witness(4, 5)
    text = w.to_json()
    again = WitnessPoint.from_json(text)
    assert again.values == w.values
    assert again.steps == w.steps
    assert again.to_json() == text
    r1 = verify_witness(4, 5, w).as_dict()
    r2 = verify_witness(4, 5, again).as_dict()
    assert r1 == r2


def test_witness_step_log_records_pivots():
    w = construct_witness(3, 5)
    assert [s.level for s in w.steps] == [2, 3, 4, 5]
    for s in w.steps[1:]:
        assert s.pivot is not None and 2 <= s.pivot <= 3
        assert s.s_values[s.pivot - 1] != 0


def test_missing_variable_is_error():
    w = construct_witness(2, 2)
    del w.values[(2, 2, 1)]
    with pytest.raises(ValueError, match="missing"):
        product_value(2, 2, w.values)


# ---------------------------------------------------------------------------
# the determinant side


def test_det_hessian_m2_entries_and_rank():
    hess = det_hessian_at(canonical_singular_diag(2))
    want = {
        ((1, 1), (2, 2)): 1,
        ((2, 2), (1, 1)): 1,
        ((1, 2), (2, 1)): -1,
        ((2, 1), (1, 2)): -1,
    }
    got = {
        (hess.labels[r], hess.labels[c]): v for (r, c), v in hess.entries.items()
    }
    assert got == want
    assert hess.rank_exact() == 4


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_det_hessian_matches_symbolic_oracle(m):
    rng = random.Random(m)
    Y = [[rng.randint(-2, 2) for _ in range(m)] for _ in range(m)]
    hess = det_hessian_at(Y)
    table, det = det_poly(m)
    point = {table.id_of_label((i + 1, j + 1)): Y[i][j] for i in range(m) for j in range(m)}
    dense_oracle = symbolic_second_derivatives(det, point)
    assert hess.to_dense() == dense_oracle


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_det_pattern_at_singular_diag(m):
    hess = det_hessian_at(canonical_singular_diag(m))
    assert singular_diag_pattern_violations(hess, m) == []
    assert hess.rank_exact() <= 3 * m


def test_det_budget():
    with pytest.raises(BudgetExceededError):
        det_hessian_at(canonical_singular_diag(9))


def test_rank_exact_rational_basics():
    assert rank_exact_rational([[1, 2], [2, 4]]) == 1
    assert rank_exact_rational([[1, 0], [0, 1]]) == 2
    assert rank_exact_rational([]) == 0


def test_rank_transfer_check_toy():
    ok = rank_transfer_check(2, 2, m=2)
    assert ok.imm_rank == 4 and ok.det_rank == 4 and ok.compatible
    ruled_out = rank_transfer_check(3, 2, m=2)
    assert ruled_out.imm_rank == 6 and ruled_out.det_rank == 4
    assert not ruled_out.compatible  # no 2x2 affine determinant can work

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wpls.errors import InvalidInputError, ShapeError
from wpls.linalg import pinv_oracle
from wpls.solver import (
    WplsProblem,
    reduce,
    residue_direct,
    residue_reduced,
    solve,
    solve_123,
    solve_dagger,
)


def random_problem(rng, m1, n1, m2, n2, rank=None, sparsity=0.0):
    x = rng.standard_normal((m1, n1))
    if rank is not None:
        x = rng.standard_normal((m1, rank)) @ rng.standard_normal((rank, n1))
    w = rng.random((m1, m2)) * (rng.random((m1, m2)) >= sparsity)
    return WplsProblem(x, rng.standard_normal((m2, n2)), w)


def min_norm_oracle(p):
    h = p.w.sum(axis=1)
    return pinv_oracle(p.x.T @ (h[:, None] * p.x)) @ (p.x.T @ (p.w @ p.y))


def test_problem_validation():
    with pytest.raises(ShapeError):
        WplsProblem(np.ones((2, 1)), np.ones((3, 1)), np.ones((2, 2)))
    with pytest.raises(InvalidInputError):
        WplsProblem(np.ones((1, 1)), np.ones((1, 1)), [[-1.0]])
    with pytest.raises(InvalidInputError):
        WplsProblem(np.ones((1, 1)), [[np.inf]], [[1.0]])


def test_problem_copies_inputs():
    x = np.ones((2, 1))
    p = WplsProblem(x, np.ones((2, 1)), np.eye(2))
    x[0, 0] = 5.0
    assert p.x[0, 0] == 1.0
    assert (p.m1, p.n1, p.m2, p.n2) == (2, 1, 2, 1)


def test_reduce_diagonal_w():
    y = np.array([[1.0, 2.0], [3.0, 4.0]])
    rp = reduce(WplsProblem(np.eye(2), y, np.diag([2.0, 5.0])))
    np.testing.assert_allclose(rp.h, [2.0, 5.0])
    np.testing.assert_allclose(rp.z, y)
    np.testing.assert_allclose(rp.d, 0.0, atol=1e-13)


def test_reduce_cross_pairing_hand():
    rp = reduce(WplsProblem([[1.0]], [[0.0], [2.0]], [[1.0, 1.0]]))
    np.testing.assert_allclose(rp.h, [2.0])
    np.testing.assert_allclose(rp.z, [[1.0]])
    np.testing.assert_allclose(rp.d, [[2.0]])


def test_reduce_zero_weight_row():
    rp = reduce(WplsProblem(np.ones((2, 1)), [[3.0], [4.0]], [[0.0, 0.0], [1.0, 2.0]]))
    assert rp.h[0] == 0.0
    assert np.all(rp.z[0] == 0.0) and np.all(rp.d[0] == 0.0)


def test_residue_direct_examples(backend):
    p = WplsProblem([[1.0]], [[0.0], [4.0]], [[1.0, 1.0]])
    assert residue_direct(p, [[2.0]]) == 8.0
    assert residue_direct(WplsProblem(np.eye(2), np.eye(2), np.zeros((2, 2))), [[5.0, 1.0], [2.0, 3.0]]) == 0.0
    y = np.array([[1.0, 2.0]])
    assert residue_direct(WplsProblem([[1.0], [2.0]], y, [[3.0], [1.0]]), [[1.0, 2.0]]) == pytest.approx(
        3.0 * 0.0 + 1.0 * 5.0
    )


def test_residue_direct_zero_when_all_rows_match(backend):
    y = np.tile([[1.0, -2.0]], (3, 1))
    p = WplsProblem([[1.0], [1.0]], y, np.arange(6.0).reshape(2, 3))
    assert residue_direct(p, [[1.0, -2.0]]) == 0.0


def test_residue_direct_shape_check():
    with pytest.raises(ShapeError):
        residue_direct(WplsProblem([[1.0]], [[1.0]], [[1.0]]), np.ones((2, 1)))


def test_residue_reduced_cross_pairing():
    p = WplsProblem([[1.0]], [[0.0], [4.0]], [[1.0, 1.0]])
    rp = reduce(p)
    assert (rp.h[0], rp.z[0, 0], rp.d[0, 0]) == (2.0, 2.0, 8.0)
    assert residue_reduced(rp, p.x, [[2.0]]) == 8.0


def test_residue_reduced_small_cross_pairing():
    p = WplsProblem([[1.0]], [[0.0], [2.0]], [[1.0, 1.0]])
    # h = 2, z = 1, d = 2: 2 * (2 - 1)^2 + 2 = 4 = (2 - 0)^2 + (2 - 2)^2
    assert residue_reduced(reduce(p), p.x, [[2.0]]) == 4.0
    assert residue_direct(p, [[2.0]]) == 4.0


def test_residue_at_zero(backend, rng):
    p = random_problem(rng, 5, 3, 7, 2)
    expected = float(np.sum(p.w * np.sum(p.y**2, axis=1)[None, :]))
    c = np.zeros((3, 2))
    assert residue_direct(p, c) == pytest.approx(expected, rel=1e-13)
    assert residue_reduced(reduce(p), p.x, c) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10), st.integers(1, 5), st.integers(1, 10), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_reduction_identity(m1, n1, m2, n2, seed):
    rng = np.random.default_rng(seed)
    p = random_problem(rng, m1, n1, m2, n2, sparsity=0.3)
    c = rng.standard_normal((n1, n2))
    e = residue_direct(p, c)
    assert abs(e - residue_reduced(reduce(p), p.x, c)) <= 1e-9 * (1 + e)


def test_solve_identity_problem(backend, rng):
    y = rng.standard_normal((4, 3))
    p = WplsProblem(np.eye(4), y, np.eye(4))
    for report in (solve_123(p), solve_dagger(p)):
        np.testing.assert_allclose(report.c, y, atol=1e-13)
        assert report.e_method < 1e-25
        assert report.detected_rank == 4


@pytest.mark.parametrize("w", [np.eye(2), None])
def test_solve_scalar_examples(backend, w):
    if w is None:
        p = WplsProblem([[1.0]], [[0.0], [4.0]], [[1.0, 1.0]])
    else:
        p = WplsProblem([[1.0], [1.0]], [[0.0], [4.0]], w)
    for report in (solve_123(p), solve_dagger(p)):
        np.testing.assert_allclose(report.c, [[2.0]])
        assert report.e_method == pytest.approx(8.0)


def test_rank_deficient_hand_example(backend):
    p = WplsProblem([[1.0, 1.0]], [[2.0]], [[1.0]])
    r123 = solve_123(p)
    np.testing.assert_allclose(r123.c, [[2.0], [0.0]])
    rdag = solve_dagger(p)
    np.testing.assert_allclose(rdag.c, [[1.0], [1.0]])
    assert r123.e_method <= 1e-12 and rdag.e_method <= 1e-12
    assert r123.detected_rank == rdag.detected_rank == 1
    assert np.linalg.norm(rdag.c) < np.linalg.norm(r123.c)
    assert (r123.method, rdag.method) == ("gi123", "dagger")


def test_full_rank_solvers_agree(backend, rng):
    p = random_problem(rng, 20, 6, 30, 4)
    c1, c2 = solve_123(p).c, solve_dagger(p).c
    assert np.linalg.norm(c1 - c2) <= 1e-8 * np.linalg.norm(c1)


@pytest.mark.parametrize("rank", [None, 3])
def test_stationarity(backend, rng, rank):
    p = random_problem(rng, 15, 6, 25, 3, rank=rank)
    h = p.w.sum(axis=1)
    rhs = p.x.T @ (p.w @ p.y)
    for report in (solve_123(p), solve_dagger(p)):
        grad = p.x.T @ (h[:, None] * (p.x @ report.c)) - rhs
        assert np.linalg.norm(grad) <= 1e-8 * (1 + np.linalg.norm(rhs))


def test_gi123_sparsity_pattern(rng):
    p = random_problem(rng, 12, 6, 10, 2, rank=4)
    report = solve_123(p)
    assert np.count_nonzero(np.any(report.c != 0.0, axis=1)) == report.detected_rank == 4


def test_dagger_is_min_norm(backend, rng):
    p = random_problem(rng, 12, 6, 10, 2, rank=3)
    np.testing.assert_allclose(solve_dagger(p).c, min_norm_oracle(p), atol=1e-8)


def test_zero_weights_give_zero_solution(backend):
    p = WplsProblem(np.ones((2, 2)), np.ones((3, 1)), np.zeros((2, 3)))
    for report in (solve_123(p), solve_dagger(p)):
        assert report.detected_rank == 0
        assert not report.c.any() and report.e_method == 0.0


def test_transposed_dagger_is_tagged(rng):
    p = random_problem(rng, 10, 4, 12, 2)
    assert solve_dagger(p, transposed=True).method == "dagger_t"


def test_evaluate_false_skips_residue(rng):
    p = random_problem(rng, 6, 2, 6, 1)
    assert np.isnan(solve_123(p, evaluate=False).e_method)
    assert solve_123(p).solve_seconds >= 0.0


def test_dispatch():
    p = WplsProblem([[1.0, 1.0]], [[2.0]], [[1.0]])
    assert solve(p, "auto").method == "gi123"
    assert solve(p, "dagger").method == "dagger"
    with pytest.raises(ValueError):
        solve(p, "qr")

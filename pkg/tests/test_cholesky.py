import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import planted_psd
from wpls.cholesky import auto_tol, cholesky, compact_rows, gen_chol, tri_inverse
from wpls.errors import (
    InvalidInputError,
    NotPositiveSemidefiniteError,
    RankZeroError,
    ShapeError,
    SingularFactorError,
)
from wpls.linalg import svd_rank


def test_identity(backend):
    f = gen_chol(np.eye(3))
    np.testing.assert_array_equal(f.r, np.eye(3))
    assert f.rank == 3 and not f.zero_rows.any()


def test_rank_one_hand(backend):
    f = gen_chol([[4.0, 2.0], [2.0, 1.0]])
    np.testing.assert_allclose(f.r, [[2.0, 1.0], [0.0, 0.0]])
    assert f.rank == 1
    assert f.zero_rows.tolist() == [False, True]
    np.testing.assert_allclose(f.r.T @ f.r, [[4.0, 2.0], [2.0, 1.0]])


def test_full_rank_hand(backend):
    f = gen_chol([[1.0, 2.0], [2.0, 13.0]])
    np.testing.assert_allclose(f.r, [[1.0, 2.0], [0.0, 3.0]])
    assert f.rank == 2


def test_zero_matrix(backend):
    f = gen_chol(np.zeros((2, 2)))
    np.testing.assert_array_equal(f.r, 0.0)
    assert f.rank == 0
    with pytest.raises(RankZeroError):
        compact_rows(f)


def test_zero_row_in_the_middle(backend):
    # column 1 duplicates column 0, column 2 independent
    b = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 2.0]])
    f = gen_chol(b.T @ b)
    assert f.zero_rows.tolist() == [False, True, False]
    assert np.all(f.r[1] == 0.0)
    np.testing.assert_allclose(f.r.T @ f.r, b.T @ b, atol=1e-14)


def test_indefinite_raises(backend):
    with pytest.raises(NotPositiveSemidefiniteError) as info:
        gen_chol([[1.0, 2.0], [2.0, 1.0]])
    assert info.value.index == 1
    assert info.value.value == pytest.approx(-3.0)


def test_rejects_asymmetric_and_rectangular():
    with pytest.raises(InvalidInputError):
        gen_chol([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(ShapeError):
        gen_chol(np.ones((2, 3)))


def test_tolerance_schemes():
    g = np.diag([4.0, 1.0])
    base = 2 * np.spacing(4.0)
    assert auto_tol(g, "bare") == base
    assert auto_tol(g, "auto") == 2.0**20 * base
    assert gen_chol(g, 0.5).tol == 0.5
    with pytest.raises(ValueError):
        auto_tol(g, "nope")


def test_explicit_tolerance_zeroes_small_pivot(backend):
    f = gen_chol(np.diag([1.0, 1e-3]), tol=1e-2)
    assert f.rank == 1 and f.zero_rows.tolist() == [False, True]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.data())
def test_reconstruction_and_structure(n, data):
    r = data.draw(st.integers(0, n))
    g = planted_psd(np.random.default_rng(data.draw(st.integers(0, 2**32 - 1))), n, r)
    f = gen_chol(g)
    assert np.linalg.norm(f.r.T @ f.r - g) <= 1e-10 * (1 + np.linalg.norm(g))
    assert np.array_equal(np.triu(f.r), f.r)
    assert np.all(np.diagonal(f.r) >= 0.0)
    assert np.all(f.r[f.zero_rows] == 0.0)
    assert f.rank == r


def test_backends_agree(rng):
    from wpls import _backend

    g = planted_psd(rng, 30, 22)
    out = {}
    for name in _backend.available():
        with _backend.use_backend(name):
            out[name] = gen_chol(g)
    ref = next(iter(out.values()))
    for f in out.values():
        np.testing.assert_array_equal(f.zero_rows, ref.zero_rows)
        np.testing.assert_allclose(f.r, ref.r, rtol=0, atol=1e-10 * np.abs(ref.r).max())


def test_rank_matches_svd_oracle(backend, rng):
    for _ in range(20):
        n = int(rng.integers(2, 25))
        r = int(rng.integers(1, n + 1))
        g = planted_psd(rng, n, r)
        assert gen_chol(g).rank == svd_rank(g) == r


def test_compact_rows():
    np.testing.assert_array_equal(compact_rows(gen_chol(np.eye(3))), np.eye(3))
    s = compact_rows(gen_chol([[4.0, 2.0], [2.0, 1.0]]))
    np.testing.assert_allclose(s, [[2.0, 1.0]])


def test_cholesky_spd_and_singular(backend, rng):
    a = rng.standard_normal((6, 4))
    r = cholesky(a.T @ a)
    np.testing.assert_allclose(r.T @ r, a.T @ a, atol=1e-12)
    with pytest.raises(SingularFactorError):
        cholesky([[1.0, 1.0], [1.0, 1.0]])


def test_tri_inverse_examples(backend):
    np.testing.assert_array_equal(tri_inverse(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(tri_inverse([[1.0, 2.0], [0.0, 3.0]]), [[1.0, -2.0 / 3.0], [0.0, 1.0 / 3.0]])
    np.testing.assert_array_equal(tri_inverse([[2.0, 0.0], [0.0, 4.0]]), [[0.5, 0.0], [0.0, 0.25]])


def test_tri_inverse_random(backend, rng):
    r = np.triu(rng.standard_normal((12, 12)))
    np.fill_diagonal(r, 1.0 + rng.random(12))
    u = tri_inverse(r)
    np.testing.assert_allclose(r @ u, np.eye(12), atol=1e-10)
    assert np.array_equal(np.triu(u), u)


def test_tri_inverse_rejects_zero_diagonal():
    with pytest.raises(SingularFactorError):
        tri_inverse([[1.0, 1.0], [0.0, 0.0]])


def test_default_tolerance_drops_weak_directions(rng):
    # Gram pivots below 2^20 n eps(||G||) are indistinguishable from round-off
    # and get zeroed; the "bare" threshold keeps them
    q1, _ = np.linalg.qr(rng.standard_normal((10, 6)))
    q2, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    a = (q1 * np.geomspace(1.0, 1e-6, 6)) @ q2.T
    g = a.T @ a
    assert gen_chol(g, "bare").rank == 6
    assert gen_chol(g).rank == 5

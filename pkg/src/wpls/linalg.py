"""Dense real matrices and the elementary operations the solvers are built on.

A matrix is a 2-D, C-contiguous ``numpy.ndarray`` of float64. Products and
norms are thin wrappers over numpy; the SVD is a one-sided Jacobi
implementation kept deliberately simple and slow, and is only used as an
oracle (test-problem generation and verification).
"""

from __future__ import annotations

import numpy as np

from . import _backend
from .errors import ConvergenceError, InvalidInputError, NumericalError, ShapeError

Matrix = np.ndarray

EPS = np.finfo(np.float64).eps
SVD_TOL = 1e-14
SVD_MAX_SWEEPS = 60


def as_matrix(a, name: str = "matrix", copy: bool = False) -> Matrix:
    """Validate and convert ``a`` to a finite float64 C-contiguous 2-D array.

    Without ``copy`` a conforming input is returned as is; nothing in the
    package mutates its inputs.
    """
    m = np.array(a, dtype=np.float64, order="C", copy=True if copy else None)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {m.shape}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"{name} must have positive dimensions, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name} contains NaN or Inf")
    return m


def _finite(result: Matrix, what: str) -> Matrix:
    if not np.all(np.isfinite(result)):
        raise NumericalError(f"{what} produced non-finite values")
    return result


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return _finite(np.ascontiguousarray(a @ b), "matrix product")


def transpose(a: Matrix) -> Matrix:
    return np.ascontiguousarray(a.T)


def frobenius_norm(a: Matrix) -> float:
    return float(np.linalg.norm(a))


def inf_norm(a: Matrix) -> float:
    """Maximum absolute row sum."""
    return float(np.abs(a).sum(axis=1).max())


def _complete_orthonormal(u: Matrix, missing: np.ndarray) -> None:
    """Fill the columns of ``u`` flagged in ``missing`` with unit vectors orthogonal to the rest."""
    m = u.shape[0]
    done = ~missing
    for j in np.flatnonzero(missing):
        basis = u[:, done]
        for e in range(m):
            cand = np.zeros(m)
            cand[e] = 1.0
            for _ in range(2):
                cand -= basis @ (basis.T @ cand)
            nrm = np.linalg.norm(cand)
            if nrm > 0.5:
                break
        u[:, j] = cand / nrm
        done[j] = True


def svd_oracle(a: Matrix, tol: float = SVD_TOL, max_sweeps: int = SVD_MAX_SWEEPS):
    """Thin singular value decomposition by one-sided Jacobi rotations.

    Returns ``(U, s, V)`` with ``a = U @ diag(s) @ V.T``, ``s`` non-increasing,
    and orthonormal columns in ``U`` (rows x k) and ``V`` (cols x k), where
    ``k = min(rows, cols)``.

    Raises
    ------
    ConvergenceError
        If off-diagonal inner products are still above ``tol`` times the
        product of column norms after ``max_sweeps`` sweeps.
    """
    a = as_matrix(a)
    if a.shape[0] < a.shape[1]:
        u, s, v = svd_oracle(a.T, tol, max_sweeps)
        return v, s, u
    n = a.shape[1]
    # power-of-two prescale (exact) keeps squared norms clear of under/overflow
    amax = float(np.abs(a).max())
    shift = int(np.frexp(amax)[1]) if amax > 0.0 else 0
    bt = np.ldexp(np.array(a.T, order="C", copy=True), -shift)
    vt = np.eye(n)
    sweeps = _backend.kernels.jacobi_sweeps(bt, vt, tol, max_sweeps)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    s = np.sqrt(np.einsum("ij,ij->i", bt, bt))
    order = np.argsort(-s, kind="stable")
    s = s[order]
    u = bt[order].T.copy()
    s_scaled, s = s, np.ldexp(s, shift)
    v = vt[order].T.copy()
    zero = s_scaled == 0.0
    u[:, ~zero] /= s_scaled[~zero]
    if zero.any():
        _complete_orthonormal(u, zero)
    return u, s, v


def rank_threshold(s: np.ndarray, shape: tuple[int, int]) -> float:
    """Singular values at or below this are treated as zero."""
    return max(shape) * EPS * (s[0] if s.size else 0.0)


def svd_rank(a: Matrix) -> int:
    _, s, _ = svd_oracle(a)
    return int(np.count_nonzero(s > rank_threshold(s, np.shape(a))))


def pinv_oracle(a: Matrix) -> Matrix:
    """Moore-Penrose inverse through :func:`svd_oracle`."""
    u, s, v = svd_oracle(a)
    keep = s > rank_threshold(s, np.shape(a))
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return np.ascontiguousarray((v * inv) @ u.T)

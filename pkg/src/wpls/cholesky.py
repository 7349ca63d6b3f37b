"""Generalized Cholesky factorization of symmetric positive semi-definite matrices.

For any symmetric PSD ``G`` there is a unique upper triangular ``R`` with
``R'R = G``, a nonnegative diagonal, and every row whose diagonal entry is
zero entirely zero. :func:`gen_chol` computes it with the usual row-oriented
Cholesky recurrence, zeroing a row instead of failing when its pivot is
numerically zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import (
    InvalidInputError,
    NotPositiveSemidefiniteError,
    RankZeroError,
    ShapeError,
    SingularFactorError,
)
from .linalg import Matrix, as_matrix, inf_norm

SYMMETRY_RTOL = 1e-12

# Safety factor on the n * eps(||G||_inf) pivot threshold. Pivots of dependent
# columns in a floating-point Gram matrix routinely exceed the bare threshold.
PIVOT_SAFETY = 2.0**20


@dataclass(frozen=True)
class GenCholFactor:
    r: Matrix
    zero_rows: np.ndarray
    rank: int
    tol: float

    @property
    def n(self) -> int:
        return self.r.shape[0]


def auto_tol(g: Matrix, scheme: str = "auto") -> float:
    """Zero-pivot threshold for ``g``.

    ``"bare"`` is ``n * eps(||g||_inf)``, the spacing of floating point
    numbers at the infinity norm times the order. ``"auto"`` multiplies it by
    :data:`PIVOT_SAFETY`.
    """
    base = g.shape[0] * float(np.spacing(inf_norm(g)))
    if scheme == "bare":
        return base
    if scheme == "auto":
        return PIVOT_SAFETY * base
    raise ValueError(f"unknown tolerance scheme {scheme!r}")


def _check_symmetric(g: Matrix) -> None:
    if g.shape[0] != g.shape[1]:
        raise ShapeError(f"Gram matrix must be square, got {g.shape}")
    scale = float(np.abs(g).max())
    if float(np.abs(g - g.T).max()) > SYMMETRY_RTOL * scale:
        raise InvalidInputError("Gram matrix is not symmetric")


def gen_chol(g, tol: float | str = "auto") -> GenCholFactor:
    """Generalized Cholesky factor of a symmetric PSD matrix.

    Only the upper triangle is read, after a symmetry check. A pivot ``v``
    with ``|v| <= tol`` zeroes its row; ``v < -tol`` raises
    :class:`~wpls.errors.NotPositiveSemidefiniteError`.

    Parameters
    ----------
    g : array_like, shape (n, n)
    tol : float or {"auto", "bare"}
        Absolute pivot threshold, or the name of a scheme for :func:`auto_tol`.
    """
    g = as_matrix(g, "Gram matrix")
    _check_symmetric(g)
    if isinstance(tol, str):
        tol = auto_tol(g, tol)
    r, bad, value = _backend.kernels.gen_chol(g, float(tol))
    if bad >= 0:
        raise NotPositiveSemidefiniteError(bad, value, tol)
    zero_rows = np.diagonal(r) == 0.0
    return GenCholFactor(r, zero_rows, int(np.count_nonzero(~zero_rows)), float(tol))


def cholesky(g) -> Matrix:
    """Classical upper Cholesky factor of a symmetric positive definite matrix."""
    g = as_matrix(g, "Gram matrix")
    _check_symmetric(g)
    r, bad, value = _backend.kernels.gen_chol(g, 0.0)
    if bad >= 0:
        raise NotPositiveSemidefiniteError(bad, value, 0.0)
    if np.any(np.diagonal(r) == 0.0):
        raise SingularFactorError("matrix is singular; use gen_chol")
    return r


def compact_rows(f: GenCholFactor) -> Matrix:
    """Drop the zero rows of ``f.r``, leaving a full row rank ``rank x n`` matrix."""
    if f.rank == 0:
        raise RankZeroError("generalized Cholesky factor has rank 0")
    return np.ascontiguousarray(f.r[~f.zero_rows])


def tri_inverse(r) -> Matrix:
    """Inverse of an upper triangular matrix with a positive diagonal."""
    r = as_matrix(r, "triangular factor")
    if r.shape[0] != r.shape[1]:
        raise ShapeError(f"triangular factor must be square, got {r.shape}")
    if not np.all(np.diagonal(r) > 0.0):
        raise SingularFactorError("diagonal entries must be strictly positive; use inv123 for singular factors")
    keep = np.ones(r.shape[0], dtype=np.uint8)
    return _backend.kernels.inv123(np.triu(r), keep)

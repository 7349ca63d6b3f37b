"""Generalized inverses built on the generalized Cholesky factor.

* :func:`inv123` solves ``R U = I_R`` by backward substitution restricted to
  the nonzero rows of ``R``; ``U`` is a {1,2,3}-inverse of ``R``.
* :func:`inv123_general` gives the {1,2,3}-inverse ``U U' A'`` of a tall ``A``.
* :func:`mp_inverse` gives the Moore-Penrose inverse as
  ``S' (S S')^-1 (S S')^-1 S A'`` where ``S`` is the compacted factor of ``A'A``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .cholesky import GenCholFactor, cholesky, compact_rows, gen_chol, tri_inverse
from .errors import ShapeError
from .linalg import Matrix, as_matrix


@dataclass(frozen=True)
class Inv123Factor:
    u: Matrix
    source_zero_rows: np.ndarray

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(~self.source_zero_rows))


def inv123(f: GenCholFactor) -> Inv123Factor:
    # the zero-row mask is reused, not re-derived from a tolerance
    keep = (~f.zero_rows).astype(np.uint8)
    u = _backend.kernels.inv123(f.r, keep)
    return Inv123Factor(u, f.zero_rows.copy())


def inv123_general(a, tol: float | str = "auto") -> Matrix:
    """{1,2,3}-inverse ``U U' A'`` of a matrix with at least as many rows as columns."""
    a = as_matrix(a)
    if a.shape[0] < a.shape[1]:
        raise ShapeError(f"inv123_general needs rows >= cols, got {a.shape}")
    u = inv123(gen_chol(a.T @ a, tol)).u
    return np.ascontiguousarray(u @ (u.T @ a.T))


def inverse_gram_pair(s: Matrix, transposed: bool = False) -> Matrix:
    """``(S S')^-1`` from the classical Cholesky factor of ``S S'``.

    ``transposed=True`` forms ``T'T`` instead of ``T T'`` from ``T = R^-1``,
    i.e. ``(R R')^-1`` rather than ``(R'R)^-1``. That product is not the inverse
    of ``S S'``; the option exists only to reproduce that erroneous variant in
    benchmarks.
    """
    t = tri_inverse(cholesky(s @ s.T))
    return t.T @ t if transposed else t @ t.T


def mp_inverse(a, tol: float | str = "auto") -> Matrix:
    """Moore-Penrose inverse through the generalized Cholesky factor of ``A'A``.

    Wide matrices use ``pinv(A) = pinv(A')'``. A rank-0 input gives the zero
    matrix of transposed shape. The repeated ``(S S')^-1`` factor is kept as
    is; its conditioning is the square of that of ``S S'``.
    """
    a = as_matrix(a)
    m, n = a.shape
    if m < n:
        return np.ascontiguousarray(mp_inverse(a.T, tol).T)
    f = gen_chol(a.T @ a, tol)
    if f.rank == 0:
        return np.zeros((n, m))
    s = compact_rows(f)
    iss = inverse_gram_pair(s)
    return np.ascontiguousarray(s.T @ (iss @ (iss @ (s @ a.T))))

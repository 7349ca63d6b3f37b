"""Weighted pairing least-squares problems and their two fast solvers.

A WPLS problem minimizes

    E(V) = sum_i sum_j w_ij * ||X[i] @ V - Y[j]||^2

over ``V`` (n1 x n2), with a nonnegative m1 x m2 pairing matrix ``W``. With
``h_i = sum_j w_ij`` and ``Z = H^+ W Y`` it reduces to the diagonal weighted
problem ``sum_i h_i ||X[i] V - Z[i]||^2`` plus a constant ``sum d_ik``.

Both solvers factor the Gram matrix ``X' H X``:

* :func:`solve_123` uses the {1,2,3}-inverse, ``C = U U' X' W Y``.
* :func:`solve_dagger` uses the Moore-Penrose inverse and returns the
  minimum-norm minimizer, ``C = S' (S S')^-1 (S S')^-1 S X' W Y``.

Minimizers are not unique for rank-deficient problems; a report records
which method produced ``C`` and no attempt is made to canonicalize it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _backend
from .cholesky import compact_rows, gen_chol
from .errors import InvalidInputError, NumericalError, ShapeError
from .ginverse import inv123, inverse_gram_pair
from .linalg import Matrix, as_matrix

METHODS = ("gi123", "dagger")


@dataclass(frozen=True)
class WplsProblem:
    x: Matrix
    y: Matrix
    w: Matrix

    def __post_init__(self):
        x = as_matrix(self.x, "X", copy=True)
        y = as_matrix(self.y, "Y", copy=True)
        w = as_matrix(self.w, "W", copy=True)
        if w.shape != (x.shape[0], y.shape[0]):
            raise ShapeError(
                f"W must be {x.shape[0]}x{y.shape[0]} (rows of X by rows of Y), got {w.shape[0]}x{w.shape[1]}"
            )
        if np.any(w < 0.0):
            raise InvalidInputError("W has negative entries")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "w", w)

    @property
    def m1(self) -> int:
        return self.x.shape[0]

    @property
    def n1(self) -> int:
        return self.x.shape[1]

    @property
    def m2(self) -> int:
        return self.y.shape[0]

    @property
    def n2(self) -> int:
        return self.y.shape[1]


@dataclass(frozen=True)
class ReducedProblem:
    h: np.ndarray
    z: Matrix
    d: Matrix


@dataclass(frozen=True)
class SolveReport:
    c: Matrix
    e_method: float
    detected_rank: int
    solve_seconds: float
    method: str


def pinv_diag(h: np.ndarray) -> np.ndarray:
    out = np.zeros_like(h)
    pos = h > 0.0
    out[pos] = 1.0 / h[pos]
    return out


def reduce(p: WplsProblem) -> ReducedProblem:
    h = p.w.sum(axis=1)
    hinv = pinv_diag(h)[:, None]
    wy = p.w @ p.y
    wy2 = p.w @ (p.y * p.y)
    z = hinv * wy
    d = wy2 - hinv * wy * wy
    return ReducedProblem(h, z, d)


def residue_direct(p: WplsProblem, c) -> float:
    c = np.ascontiguousarray(c, dtype=np.float64)
    if c.shape != (p.n1, p.n2):
        raise ShapeError(f"C must be {p.n1}x{p.n2}, got {c.shape}")
    return float(_backend.kernels.residue(np.ascontiguousarray(p.x @ c), p.y, p.w))


def residue_reduced(rp: ReducedProblem, x, c) -> float:
    r = x @ c - rp.z
    return float(rp.h @ np.einsum("ik,ik->i", r, r) + rp.d.sum())


def _gram(p: WplsProblem):
    h = p.w.sum(axis=1)
    # scale rows instead of forming diag(h)
    with np.errstate(over="ignore", invalid="ignore"):
        g = p.x.T @ (h[:, None] * p.x)
    if not np.all(np.isfinite(g)):
        raise NumericalError("Gram matrix X' H X overflows")
    return h, g


def _rhs(p: WplsProblem) -> Matrix:
    return p.x.T @ (p.w @ p.y)


def _report(p, c, rank, elapsed, method, evaluate):
    e = residue_direct(p, c) if evaluate else float("nan")
    return SolveReport(c, e, rank, elapsed, method)


def solve_123(p: WplsProblem, tol: float | str = "auto", evaluate: bool = True) -> SolveReport:
    """Minimizer ``C = U U' X' W Y`` with ``U`` the {1,2,3}-inverse of ``R``.

    Each column of ``C`` has at most ``rank`` nonzero entries, since the rows
    of ``U`` at zero pivots vanish. The residue (skipped when ``evaluate`` is
    false) is computed after the clock stops.
    """
    start = time.perf_counter()
    _, g = _gram(p)
    f = gen_chol(g, tol)
    u = inv123(f).u
    c = u @ (u.T @ _rhs(p))
    elapsed = time.perf_counter() - start
    return _report(p, c, f.rank, elapsed, "gi123", evaluate)


def solve_dagger(
    p: WplsProblem, tol: float | str = "auto", transposed: bool = False, evaluate: bool = True
) -> SolveReport:
    """Minimum-norm minimizer through the fast Moore-Penrose inverse.

    ``transposed=True`` substitutes the erroneous ``(R R')^-1`` product (see
    :func:`~wpls.ginverse.inverse_gram_pair`); the result is then not a
    minimizer and the report is tagged ``"dagger_t"``.
    """
    start = time.perf_counter()
    _, g = _gram(p)
    f = gen_chol(g, tol)
    if f.rank == 0:
        c = np.zeros((p.n1, p.n2))
    else:
        s = compact_rows(f)
        iss = inverse_gram_pair(s, transposed)
        c = s.T @ (iss @ (iss @ (s @ _rhs(p))))
    elapsed = time.perf_counter() - start
    method = "dagger_t" if transposed else "dagger"
    return _report(p, c, f.rank, elapsed, method, evaluate)


def solve(p: WplsProblem, method: str = "auto", tol: float | str = "auto") -> SolveReport:
    """Dispatch on ``method``: ``"gi123"``, ``"dagger"`` or ``"auto"`` (= gi123)."""
    if method in ("auto", "gi123"):
        return solve_123(p, tol)
    if method == "dagger":
        return solve_dagger(p, tol)
    raise ValueError(f"unknown method {method!r}")

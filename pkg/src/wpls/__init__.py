"""Weighted pairing least-squares (WPLS) solvers.

Two fast solvers built on the generalized Cholesky factor of the Gram
matrix: :func:`solve_123` ({1,2,3}-inverse) and :func:`solve_dagger`
(Moore-Penrose inverse, minimum-norm solution). Hot loops run in a compiled
extension when it is built, otherwise in numpy; see :mod:`wpls._backend`.
"""

from . import _backend
from .cholesky import GenCholFactor, cholesky, compact_rows, gen_chol, tri_inverse
from .generate import GeneratedProblem, GenParams, generate, householder, spectrum_diag
from .ginverse import Inv123Factor, inv123, inv123_general, mp_inverse
from .linalg import (
    Matrix,
    frobenius_norm,
    inf_norm,
    mat_mul,
    pinv_oracle,
    svd_oracle,
    transpose,
)
from .mmio import read_matrix, write_matrix
from .solver import (
    ReducedProblem,
    SolveReport,
    WplsProblem,
    reduce,
    residue_direct,
    residue_reduced,
    solve,
    solve_123,
    solve_dagger,
)


def backend() -> str:
    """Name of the active kernel backend: "compiled" or "python"."""
    return _backend.name


__all__ = [
    "GenCholFactor", "GenParams", "GeneratedProblem", "Inv123Factor", "Matrix", "ReducedProblem",
    "SolveReport", "WplsProblem", "backend", "cholesky", "compact_rows", "frobenius_norm", "gen_chol",
    "generate", "householder", "inf_norm", "inv123", "inv123_general", "mat_mul", "mp_inverse",
    "pinv_oracle", "read_matrix", "reduce", "residue_direct", "residue_reduced", "solve", "solve_123",
    "solve_dagger", "spectrum_diag", "svd_oracle", "transpose", "tri_inverse", "write_matrix",
]

"""Synthetic WPLS problems with planted size, rank, spectrum and exact residue.

Construction, for sizes m2 >= m1 > n1, rank r and spectral ratio kappa:

1. Householder reflectors M (m1 x m1) and N (n1 x n1) from random vectors.
2. ``A = M[:, :r] D N[:r, :]`` with ``D = diag(kappa^((r-i) / (2(r-1))))``,
   so the nonzero eigenvalues of ``A'A`` run from 1 to kappa.
3. ``P = M[:, r:] F`` for random F; the columns of P are orthogonal to A.
4. ``h_i = max(|sum_j a_ij|, |sum_k p_ik|)^2``, ``X = (H^1/2)^+ A`` and
   ``HZ = H^1/2 (A V + P)`` for a random V.
5. Random nonnegative ``T`` is normalized into ``W = H K^-1 T`` (row sums h)
   and ``Y = pinv(W) HZ``, redrawing T until ``W Y = HZ`` to ``factor_tol``.

The minimum of the objective is then ``||P||^2 + sum_ik d_ik``.

Randomness comes from numpy's PCG64 bit generator seeded with
``SeedSequence(seed, spawn_key=(restart,))``. Draw order within one pass: u
and v uniform on (-1, 1), then F, V, and each T, uniform on [0, 1).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import GenerationError, InvalidInputError
from .linalg import Matrix, pinv_oracle
from .solver import WplsProblem, reduce

KAPPA_WARN = 4096.0


@dataclass(frozen=True)
class GenParams:
    n1: int
    m1: int
    m2: int
    n2: int
    r: int
    kappa_r: float
    seed: int
    max_attempts: int = 50
    factor_tol: float = 1e-10

    def __post_init__(self):
        if min(self.n1, self.m1, self.m2, self.n2) < 1:
            raise InvalidInputError("sizes must be positive")
        if not self.m2 >= self.m1 > self.n1:
            raise InvalidInputError(f"need m2 >= m1 > n1, got m2={self.m2}, m1={self.m1}, n1={self.n1}")
        if not 1 <= self.r <= self.n1:
            raise InvalidInputError(f"rank must be in [1, n1={self.n1}], got {self.r}")
        if not self.kappa_r >= 1.0:
            raise InvalidInputError(f"kappa_r must be >= 1, got {self.kappa_r}")
        if not 0 <= self.seed < 2**64:
            raise InvalidInputError("seed must be an unsigned 64-bit integer")
        if self.max_attempts < 1:
            raise InvalidInputError("max_attempts must be positive")

    @classmethod
    def standard(cls, n1: int, kappa_r: float, deficient: bool = False, seed: int = 0, n2: int = 32, **kw):
        """Benchmark layout: m1 = 2 n1, m2 = 2 m1, rank n1 or ceil(7 n1 / 8)."""
        r = math.ceil(7 * n1 / 8) if deficient else n1
        return cls(n1=n1, m1=2 * n1, m2=4 * n1, n2=n2, r=r, kappa_r=kappa_r, seed=seed, **kw)


@dataclass(frozen=True)
class Planted:
    """Intermediate quantities kept for verification."""

    a: Matrix
    p: Matrix
    h: np.ndarray
    hz: Matrix
    v: Matrix


@dataclass(frozen=True)
class GeneratedProblem:
    problem: WplsProblem
    e_exact: float
    true_rank: int
    attempts_used: int
    params: GenParams
    planted: Planted


def householder(v) -> Matrix:
    """Reflector ``I - 2 v v' / (v'v)``."""
    v = np.asarray(v, dtype=np.float64).ravel()
    vv = float(v @ v)
    if vv == 0.0:
        raise InvalidInputError("Householder vector must be nonzero")
    return np.eye(v.size) - (2.0 / vv) * np.outer(v, v)


def spectrum_diag(r: int, kappa_r: float) -> Matrix:
    """``diag(kappa^((r-i) / (2(r-1))))`` for i = 1..r; ``[[1]]`` when r = 1."""
    if r == 1:
        return np.ones((1, 1))
    expo = (r - 1 - np.arange(r)) / (2.0 * (r - 1))
    return np.diag(float(kappa_r) ** expo)


def _rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(restart,))))


def generate(params: GenParams) -> GeneratedProblem:
    """Build one problem; see the module docstring for the construction.

    Raises
    ------
    GenerationError
        If no T reproduces ``HZ`` within ``factor_tol`` after ``max_attempts``
        draws. Large kappa makes this common; retry with another seed.
    """
    n1, m1, m2, n2, r = params.n1, params.m1, params.m2, params.n2, params.r
    if params.kappa_r > KAPPA_WARN:
        warnings.warn(f"kappa_r = {params.kappa_r} > {KAPPA_WARN:g}: generation often fails", stacklevel=2)
    d = np.diagonal(spectrum_diag(r, params.kappa_r))

    attempts = 0
    for restart in range(params.max_attempts):
        rng = _rng(params.seed, restart)
        m = householder(rng.uniform(-1.0, 1.0, m1))
        nmat = householder(rng.uniform(-1.0, 1.0, n1))
        a = (m[:, :r] * d) @ nmat[:r, :]
        f = rng.uniform(0.0, 1.0, (m1 - r, n2))
        p = m[:, r:] @ f
        h = np.maximum(np.abs(a.sum(axis=1)), np.abs(p.sum(axis=1))) ** 2
        if np.any(h == 0.0):
            continue
        sqrt_h = np.sqrt(h)
        x = a / sqrt_h[:, None]
        v = rng.uniform(0.0, 1.0, (n1, n2))
        hz = sqrt_h[:, None] * (a @ v + p)
        bound = params.factor_tol * (1.0 + np.linalg.norm(hz))

        while attempts < params.max_attempts:
            attempts += 1
            t = rng.uniform(0.0, 1.0, (m1, m2))
            w = (h / t.sum(axis=1))[:, None] * t
            y = pinv_oracle(w) @ hz
            if np.linalg.norm(w @ y - hz) <= bound:
                break
        else:
            raise GenerationError(
                f"W Y = HZ not reached within factor_tol={params.factor_tol:g} "
                f"after {attempts} attempts; try another seed",
                attempts,
            )
        problem = WplsProblem(x, y, w)
        e_exact = float(np.linalg.norm(p) ** 2 + reduce(problem).d.sum())
        return GeneratedProblem(problem, e_exact, r, attempts, params, Planted(a, p, h, hz, v))

    raise GenerationError(f"every restart produced a zero weight row (seed {params.seed})", attempts)

"""Dense Matrix Market (``array real general``) reading and writing.

Values are written one per line in column-major order with 17 significant
digits, so ``read_matrix(write_matrix(a))`` reproduces ``a`` bit for bit.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import MatrixMarketError
from .linalg import Matrix

HEADER = "%%MatrixMarket matrix array real general"


def write_matrix(a, path, comments=()) -> None:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    lines = [HEADER]
    lines += [f"% {c}" for c in comments]
    lines.append(f"{a.shape[0]} {a.shape[1]}")
    lines += [f"{x:.17g}" for x in a.ravel(order="F")]
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_header(path, line):
    tokens = line.split()
    if not tokens or tokens[0] != "%%MatrixMarket":
        raise MatrixMarketError(path, 1, "missing %%MatrixMarket header")
    rest = [t.lower() for t in tokens[1:]]
    if len(rest) != 4 or rest[0] != "matrix":
        raise MatrixMarketError(path, 1, f"malformed header {line.strip()!r}")
    if rest[1] != "array":
        raise MatrixMarketError(path, 1, f"unsupported format {rest[1]!r}; only dense 'array' is read")
    if rest[2] not in ("real", "integer"):
        raise MatrixMarketError(path, 1, f"unsupported field {rest[2]!r}")
    if rest[3] != "general":
        raise MatrixMarketError(path, 1, f"unsupported symmetry {rest[3]!r}")


def read_matrix(path) -> Matrix:
    with open(path) as fh:
        text = fh.read().splitlines()
    if not text:
        raise MatrixMarketError(path, 0, "empty file")
    _parse_header(path, text[0])

    shape = None
    values = []
    for lineno, line in enumerate(text[1:], start=2):
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        if shape is None:
            parts = stripped.split()
            try:
                shape = tuple(int(t) for t in parts)
            except ValueError:
                raise MatrixMarketError(path, lineno, f"bad size line {stripped!r}") from None
            if len(shape) != 2 or min(shape) < 1:
                raise MatrixMarketError(path, lineno, f"size line must hold two positive integers, got {stripped!r}")
            continue
        for tok in stripped.split():
            try:
                x = float(tok)
            except ValueError:
                raise MatrixMarketError(path, lineno, f"non-numeric value {tok!r}") from None
            if not math.isfinite(x):
                raise MatrixMarketError(path, lineno, f"non-finite value {tok!r}")
            values.append(x)
            if len(values) > shape[0] * shape[1]:
                raise MatrixMarketError(
                    path, lineno, f"more values than the declared {shape[0]}x{shape[1]}"
                )
    if shape is None:
        raise MatrixMarketError(path, len(text), "missing size line")
    if len(values) != shape[0] * shape[1]:
        raise MatrixMarketError(
            path, len(text), f"expected {shape[0] * shape[1]} values for {shape[0]}x{shape[1]}, found {len(values)}"
        )
    return np.ascontiguousarray(np.array(values).reshape(shape, order="F"))

"""Pure-Python kernels, used when the compiled extension is unavailable.

Signatures and return conventions match ``_kernels.pyx``. Inner loops are
vectorized over rows or column pairs with numpy, so results agree with the
compiled kernels to round-off but are not bit-identical.
"""

import numpy as np


def gen_chol(g, tol):
    n = g.shape[0]
    r = np.zeros((n, n))
    rows = []
    for i in range(n):
        if rows:
            v = g[i, i:] - r[rows, i] @ r[rows, i:]
        else:
            v = g[i, i:].copy()
        piv = v[0]
        if piv > tol:
            piv = np.sqrt(piv)
            r[i, i] = piv
            r[i, i + 1:] = v[1:] / piv
            rows.append(i)
        elif piv < -tol:
            return r, i, float(piv)
    return r, -1, 0.0


def inv123(r, keep):
    n = r.shape[0]
    u = np.zeros((n, n))
    for j in range(n - 1, -1, -1):
        if not keep[j]:
            continue
        col = u[:, j]
        for i in range(j, -1, -1):
            if not keep[i]:
                continue
            if i == j:
                col[i] = 1.0 / r[i, i]
            else:
                col[i] = -(r[i, i + 1:j + 1] @ col[i + 1:j + 1]) / r[i, i]
    return u


def _round_robin(n):
    """Yield disjoint (p, q) index arrays; n - 1 rounds cover every pair once."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    size = len(players)
    for _ in range(size - 1):
        half = size // 2
        pairs = [
            (min(a, b), max(a, b))
            for a, b in zip(players[:half], players[size - 1:half - 1:-1])
            if a >= 0 and b >= 0
        ]
        if pairs:
            p, q = zip(*pairs)
            yield np.array(p), np.array(q)
        players = [players[0], players[-1]] + players[1:-1]


def jacobi_sweeps(bt, vt, tol, max_sweeps):
    n = bt.shape[0]
    schedule = list(_round_robin(n))
    for sweep in range(max_sweeps):
        rotated = 0
        for p, q in schedule:
            bp, bq = bt[p], bt[q]
            alpha = np.einsum("ij,ij->i", bp, bp)
            beta = np.einsum("ij,ij->i", bq, bq)
            gamma = np.einsum("ij,ij->i", bp, bq)
            active = (alpha > 0.0) & (beta > 0.0)
            active &= np.abs(gamma) > tol * np.sqrt(alpha) * np.sqrt(beta)
            if not active.any():
                continue
            rotated += int(active.sum())
            p, q = p[active], q[active]
            alpha, beta, gamma = alpha[active], beta[active], gamma[active]
            zeta = (beta - alpha) / (2.0 * gamma)
            t = np.where(zeta >= 0.0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = (c * t)[:, None]
            c = c[:, None]
            for mat in (bt, vt):
                x, y = mat[p], mat[q]
                mat[p] = c * x - s * y
                mat[q] = s * x + c * y
        if rotated == 0:
            return sweep + 1
    return -1


def residue(xc, y, w):
    e = 0.0
    for i in range(xc.shape[0]):
        diff = xc[i] - y
        e += float(w[i] @ np.einsum("jk,jk->j", diff, diff))
    return e

# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.

Every function here has a twin with the same signature in ``_pykernels``.
Inputs are C-contiguous float64 arrays; validation happens in the callers.
"""

import numpy as np

from libc.math cimport fabs, hypot, sqrt


def gen_chol(const double[:, ::1] g, double tol):
    """Row-oriented generalized Cholesky on the upper triangle of ``g``.

    Returns ``(r, bad_index, bad_value)``; ``bad_index`` is -1 unless a pivot
    fell below ``-tol``, in which case the factor is incomplete.
    """
    cdef Py_ssize_t n = g.shape[0]
    if g.shape[1] != n:
        raise ValueError("g must be square")
    cdef Py_ssize_t i, j, k, kk, nk = 0, bad = -1
    cdef double a, piv, bad_value = 0.0
    r_arr = np.zeros((n, n))
    cdef double[:, ::1] r = r_arr
    cdef double[::1] v = np.empty(n)
    cdef Py_ssize_t[::1] rows = np.empty(n, dtype=np.intp)
    with nogil:
        for i in range(n):
            for j in range(i, n):
                v[j] = g[i, j]
            # zero rows of r contribute nothing
            for kk in range(nk):
                k = rows[kk]
                a = r[k, i]
                if a != 0.0:
                    for j in range(i, n):
                        v[j] -= a * r[k, j]
            piv = v[i]
            if piv > tol:
                piv = sqrt(piv)
                r[i, i] = piv
                for j in range(i + 1, n):
                    r[i, j] = v[j] / piv
                rows[nk] = i
                nk += 1
            elif piv < -tol:
                bad = i
                bad_value = piv
                break
    return r_arr, bad, bad_value


def inv123(const double[:, ::1] r, const unsigned char[::1] keep):
    """Generalized backward substitution solving ``R U = I_R``.

    ``keep[i]`` is nonzero when row ``i`` of ``r`` is nonzero.
    """
    cdef Py_ssize_t n = r.shape[0]
    if r.shape[1] != n or keep.shape[0] != n:
        raise ValueError("r must be square and keep of matching length")
    cdef Py_ssize_t i, j, k
    cdef double s
    u_arr = np.zeros((n, n))
    cdef double[:, ::1] u = u_arr
    cdef double[::1] col = np.zeros(n)
    with nogil:
        for j in range(n - 1, -1, -1):
            if not keep[j]:
                continue
            for i in range(j + 1):
                col[i] = 0.0
            for i in range(j, -1, -1):
                if not keep[i]:
                    continue
                if i == j:
                    col[i] = 1.0 / r[i, i]
                else:
                    s = 0.0
                    for k in range(i + 1, j + 1):
                        s += r[i, k] * col[k]
                    col[i] = -s / r[i, i]
            for i in range(j + 1):
                u[i, j] = col[i]
    return u_arr


def jacobi_sweeps(double[:, ::1] bt, double[:, ::1] vt, double tol, int max_sweeps):
    """One-sided Jacobi rotations on the rows of ``bt`` (columns of B), in place.

    ``vt`` accumulates the right rotations, also row-wise. Returns the number
    of sweeps used, or -1 if ``max_sweeps`` passed without convergence.
    """
    cdef Py_ssize_t n = bt.shape[0], m = bt.shape[1], nv = vt.shape[1]
    if vt.shape[0] != n:
        raise ValueError("vt must have as many rows as bt")
    cdef Py_ssize_t p, q, k
    cdef int sweep, used = -1
    cdef long rotated
    cdef double alpha, beta, gamma, zeta, t, c, s, x, y
    cdef double[::1] norms = np.empty(n)
    with nogil:
        for sweep in range(max_sweeps):
            for p in range(n):
                x = 0.0
                for k in range(m):
                    x += bt[p, k] * bt[p, k]
                norms[p] = x
            rotated = 0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    alpha = norms[p]
                    beta = norms[q]
                    if alpha == 0.0 or beta == 0.0:
                        continue
                    gamma = 0.0
                    for k in range(m):
                        gamma += bt[p, k] * bt[q, k]
                    if fabs(gamma) <= tol * sqrt(alpha) * sqrt(beta):
                        continue
                    rotated += 1
                    zeta = (beta - alpha) / (2.0 * gamma)
                    if zeta >= 0.0:
                        t = 1.0 / (zeta + hypot(1.0, zeta))
                    else:
                        t = -1.0 / (-zeta + hypot(1.0, zeta))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = c * t
                    for k in range(m):
                        x = bt[p, k]
                        y = bt[q, k]
                        bt[p, k] = c * x - s * y
                        bt[q, k] = s * x + c * y
                    for k in range(nv):
                        x = vt[p, k]
                        y = vt[q, k]
                        vt[p, k] = c * x - s * y
                        vt[q, k] = s * x + c * y
                    norms[p] = alpha - t * gamma
                    norms[q] = beta + t * gamma
                    # the cheap update cancels when a column collapses
                    if norms[p] < 0.01 * alpha:
                        x = 0.0
                        for k in range(m):
                            x += bt[p, k] * bt[p, k]
                        norms[p] = x
                    if norms[q] < 0.01 * beta:
                        x = 0.0
                        for k in range(m):
                            x += bt[q, k] * bt[q, k]
                        norms[q] = x
            if rotated == 0:
                used = sweep + 1
                break
    return used


def residue(const double[:, ::1] xc, const double[:, ::1] y, const double[:, ::1] w):
    """Plain double loop of w_ij * ||xc_i - y_j||^2 in (i, j, k) order."""
    cdef Py_ssize_t m1 = xc.shape[0], m2 = y.shape[0], n2 = y.shape[1]
    if xc.shape[1] != n2 or w.shape[0] != m1 or w.shape[1] != m2:
        raise ValueError("inconsistent shapes")
    cdef Py_ssize_t i, j, k
    cdef double e = 0.0, s, d, wij
    with nogil:
        for i in range(m1):
            for j in range(m2):
                wij = w[i, j]
                if wij == 0.0:
                    continue
                s = 0.0
                for k in range(n2):
                    d = xc[i, k] - y[j, k]
                    s += d * d
                e += wij * s
    return e

"""Pure-numpy counterparts of the kernels in :mod:`pswfkit._jit`.

Recurrences are vectorized over points; the dense eigen/SVD kernels defer
to ``numpy.linalg`` (LAPACK), which keeps the fallback usable at the sizes
the studies need.
"""

import numpy as np


def _alpha(M):
    k = np.arange(M, dtype=float)
    return (k + 1.0) / np.sqrt((2.0 * k + 1.0) * (2.0 * k + 3.0))


def legendre_table(x, M, mmax):
    x = np.asarray(x, dtype=float)
    out = np.zeros((mmax + 1, x.size, M))
    a = _alpha(M)
    out[0, :, 0] = 1.0 / np.sqrt(2.0)
    if M == 1:
        return out
    out[0, :, 1] = x * out[0, :, 0] / a[0]
    if mmax >= 1:
        out[1, :, 1] = out[0, :, 0] / a[0]
    for k in range(1, M - 1):
        out[0, :, k + 1] = (x * out[0, :, k] - a[k - 1] * out[0, :, k - 1]) / a[k]
        if mmax >= 1:
            out[1, :, k + 1] = (out[0, :, k] + x * out[1, :, k]
                                - a[k - 1] * out[1, :, k - 1]) / a[k]
        if mmax >= 2:
            out[2, :, k + 1] = (2.0 * out[1, :, k] + x * out[2, :, k]
                                - a[k - 1] * out[2, :, k - 1]) / a[k]
    return out


def legendre_series(coef, x, m):
    x = np.asarray(x, dtype=float)
    M = coef.shape[0]
    a = _alpha(M)
    v_prev = np.full_like(x, 1.0 / np.sqrt(2.0))
    d_prev = np.zeros_like(x)
    s_prev = np.zeros_like(x)
    acc = coef[0] * v_prev if m == 0 else np.zeros_like(x)
    if M == 1:
        return acc
    v = x * v_prev / a[0]
    d = v_prev / a[0]
    s = np.zeros_like(x)
    acc = acc + coef[1] * (v, d, s)[m]
    for k in range(1, M - 1):
        vn = (x * v - a[k - 1] * v_prev) / a[k]
        dn = (v + x * d - a[k - 1] * d_prev) / a[k]
        sn = (2.0 * d + x * s - a[k - 1] * s_prev) / a[k]
        v_prev, d_prev, s_prev = v, d, s
        v, d, s = vn, dn, sn
        acc += coef[k + 1] * (v, d, s)[m]
    return acc


def tridiag_ql(d, e, max_iter):
    n = d.size
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    w, v = np.linalg.eigh(T)
    return w, np.ascontiguousarray(v.T), 0


def dense_eigvals(a, balance, max_total):
    w = np.linalg.eigvals(a)
    return w.real.copy(), w.imag.copy(), 0


def jacobi_singular_values(a, tol, max_sweeps):
    return np.linalg.svd(a, compute_uv=False), 0, 0


def lu_factor(a):
    lu = np.array(a, copy=True)
    n = lu.shape[0]
    piv = np.arange(n)
    info = 0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if lu[p, k] == 0:
            info = info or k + 1
            continue
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            piv[[k, p]] = piv[[p, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv, info


def lu_solve(lu, piv, b):
    n = lu.shape[0]
    x = np.array(b[piv], dtype=np.result_type(lu, b))
    for i in range(n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x

"""Loop-level kernels, compiled with numba when available.

All routines return status codes instead of raising so the same source runs
compiled and uncompiled; the wrappers in :mod:`pswfkit.linalg` translate
codes into exceptions.
"""

import math

import numpy as np

from ._accel import njit


@njit
def legendre_table(x, M, mmax):
    """Values of normalized Legendre polynomials and derivatives.

    Returns ``out`` of shape ``(mmax + 1, len(x), M)`` with
    ``out[m, i, k] = d^m/dx^m Pbar_k(x[i])``.
    """
    npts = x.shape[0]
    out = np.zeros((mmax + 1, npts, M))
    p0 = 1.0 / math.sqrt(2.0)
    for i in range(npts):
        xi = x[i]
        out[0, i, 0] = p0
        if M == 1:
            continue
        a0 = 1.0 / math.sqrt(3.0)
        out[0, i, 1] = xi * p0 / a0
        if mmax >= 1:
            out[1, i, 1] = p0 / a0
        for k in range(1, M - 1):
            ak = (k + 1.0) / math.sqrt((2.0 * k + 1.0) * (2.0 * k + 3.0))
            akm = k / math.sqrt((2.0 * k - 1.0) * (2.0 * k + 1.0))
            out[0, i, k + 1] = (xi * out[0, i, k] - akm * out[0, i, k - 1]) / ak
            if mmax >= 1:
                out[1, i, k + 1] = (out[0, i, k] + xi * out[1, i, k]
                                    - akm * out[1, i, k - 1]) / ak
            if mmax >= 2:
                out[2, i, k + 1] = (2.0 * out[1, i, k] + xi * out[2, i, k]
                                    - akm * out[2, i, k - 1]) / ak
    return out


@njit
def legendre_series(coef, x, m):
    """Evaluate ``sum_k coef[k] * d^m/dx^m Pbar_k(x)`` without storing a table."""
    M = coef.shape[0]
    npts = x.shape[0]
    res = np.zeros(npts)
    p0 = 1.0 / math.sqrt(2.0)
    a0 = 1.0 / math.sqrt(3.0)
    for i in range(npts):
        xi = x[i]
        # (value, first, second derivative) at degrees k-1 and k
        v_prev, d_prev, s_prev = p0, 0.0, 0.0
        acc = coef[0] * (v_prev if m == 0 else 0.0)
        if M > 1:
            v, d, s = xi * p0 / a0, p0 / a0, 0.0
            if m == 0:
                acc += coef[1] * v
            elif m == 1:
                acc += coef[1] * d
            for k in range(1, M - 1):
                ak = (k + 1.0) / math.sqrt((2.0 * k + 1.0) * (2.0 * k + 3.0))
                akm = k / math.sqrt((2.0 * k - 1.0) * (2.0 * k + 1.0))
                vn = (xi * v - akm * v_prev) / ak
                dn = (v + xi * d - akm * d_prev) / ak
                sn = (2.0 * d + xi * s - akm * s_prev) / ak
                v_prev, d_prev, s_prev = v, d, s
                v, d, s = vn, dn, sn
                if m == 0:
                    acc += coef[k + 1] * v
                elif m == 1:
                    acc += coef[k + 1] * d
                else:
                    acc += coef[k + 1] * s
        res[i] = acc
    return res


@njit
def tridiag_ql(d, e, max_iter):
    """Implicit-shift QL on a symmetric tridiagonal matrix.

    ``d`` (length n) is the diagonal, ``e`` (length n-1) the off-diagonal.
    Returns ``(eigenvalues, vectors, status)`` where row ``i`` of ``vectors``
    is the eigenvector of ``eigenvalues[i]``; ``status`` is 0 on success or
    the index of the eigenvalue that failed to converge plus one.
    """
    n = d.shape[0]
    d = d.copy()
    ee = np.zeros(n)
    for i in range(n - 1):
        ee[i] = e[i]
    z = np.eye(n)
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                return d, z, l + 1
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * ee[i]
                b = c * ee[i]
                r = math.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(n):
                    f = z[i + 1, k]
                    z[i + 1, k] = s * z[i, k] + c * f
                    z[i, k] = c * z[i, k] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            ee[l] = g
            ee[m] = 0.0
    return d, z, 0


@njit
def balance(a):
    """Diagonal similarity scaling by powers of two (in place)."""
    n = a.shape[0]
    radix = 2.0
    sqrdx = radix * radix
    done = False
    while not done:
        done = True
        for i in range(n):
            r = 0.0
            c = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j, i])
                    r += abs(a[i, j])
            if c != 0.0 and r != 0.0:
                g = r / radix
                f = 1.0
                s = c + r
                while c < g:
                    f *= radix
                    c *= sqrdx
                g = r * radix
                while c > g:
                    f /= radix
                    c /= sqrdx
                if (c + r) / f < 0.95 * s:
                    done = False
                    g = 1.0 / f
                    for j in range(n):
                        a[i, j] *= g
                    for j in range(n):
                        a[j, i] *= f


@njit
def hessenberg(a):
    """Householder reduction to upper Hessenberg form (in place)."""
    n = a.shape[0]
    v = np.zeros(n)
    for k in range(n - 2):
        alpha = 0.0
        for i in range(k + 1, n):
            alpha += a[i, k] * a[i, k]
        alpha = math.sqrt(alpha)
        if alpha == 0.0:
            continue
        if a[k + 1, k] > 0.0:
            alpha = -alpha
        for i in range(n):
            v[i] = 0.0
        v[k + 1] = a[k + 1, k] - alpha
        for i in range(k + 2, n):
            v[i] = a[i, k]
        vnorm2 = 0.0
        for i in range(k + 1, n):
            vnorm2 += v[i] * v[i]
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        # left: A <- (I - beta v v^T) A
        for j in range(k, n):
            t = 0.0
            for i in range(k + 1, n):
                t += v[i] * a[i, j]
            t *= beta
            for i in range(k + 1, n):
                a[i, j] -= t * v[i]
        # right: A <- A (I - beta v v^T)
        for i in range(n):
            t = 0.0
            for j in range(k + 1, n):
                t += a[i, j] * v[j]
            t *= beta
            for j in range(k + 1, n):
                a[i, j] -= t * v[j]
        for i in range(k + 2, n):
            a[i, k] = 0.0


@njit
def hqr(h, max_total):
    """Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.

    Returns ``(wr, wi, status)``; status is nonzero when the total number of
    QR sweeps exceeds ``max_total``.
    """
    n = h.shape[0]
    # 1-based working copy keeps the classic index arithmetic intact
    a = np.zeros((n + 1, n + 1))
    for i in range(n):
        for j in range(n):
            a[i + 1, j + 1] = h[i, j]
    wr = np.zeros(n + 1)
    wi = np.zeros(n + 1)
    anorm = 0.0
    for i in range(1, n + 1):
        for j in range(max(i - 1, 1), n + 1):
            anorm += abs(a[i, j])
    nn = n
    t = 0.0
    total = 0
    x = y = z = w = p = q = r = s = 0.0
    while nn >= 1:
        its = 0
        while True:
            l = 1
            for ll in range(nn, 1, -1):
                s = abs(a[ll - 1, ll - 1]) + abs(a[ll, ll])
                if s == 0.0:
                    s = anorm
                if abs(a[ll, ll - 1]) + s == s:
                    a[ll, ll - 1] = 0.0
                    l = ll
                    break
            x = a[nn, nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + (z if p >= 0.0 else -z)
                    wr[nn - 1] = x + z
                    wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = 0.0
                    wi[nn] = 0.0
                else:
                    wr[nn - 1] = x + p
                    wr[nn] = x + p
                    wi[nn - 1] = -z
                    wi[nn] = z
                nn -= 2
                break
            if total >= max_total:
                return wr[1:], wi[1:], 1
            if its == 10 or its == 20:
                # exceptional shift
                t += x
                for i in range(1, nn + 1):
                    a[i, i] -= x
                s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                x = 0.75 * s
                y = x
                w = -0.4375 * s * s
            its += 1
            total += 1
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                if u + v == v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i, i - 2] = 0.0
                if i != m + 2:
                    a[i, i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = 0.0
                    if k != nn - 1:
                        r = a[k + 2, k - 1]
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.sqrt(p * p + q * q + r * r)
                if p < 0.0:
                    s = -s
                if s != 0.0:
                    if k == m:
                        if l != m:
                            a[k, k - 1] = -a[k, k - 1]
                    else:
                        a[k, k - 1] = -s * x
                    p += s
                    x = p / s
                    y = q / s
                    z = r / s
                    q /= p
                    r /= p
                    for j in range(k, nn + 1):
                        p = a[k, j] + q * a[k + 1, j]
                        if k != nn - 1:
                            p += r * a[k + 2, j]
                            a[k + 2, j] -= p * z
                        a[k + 1, j] -= p * y
                        a[k, j] -= p * x
                    mmin = nn if nn < k + 3 else k + 3
                    for i in range(l, mmin + 1):
                        p = x * a[i, k] + y * a[i, k + 1]
                        if k != nn - 1:
                            p += z * a[i, k + 2]
                            a[i, k + 2] -= p * r
                        a[i, k + 1] -= p * q
                        a[i, k] -= p
            if l >= nn - 1:
                break
    return wr[1:], wi[1:], 0


@njit
def jacobi_singular_values(a, tol, max_sweeps):
    """Singular values by one-sided (Hestenes) Jacobi rotations.

    Works on the rows of ``g = a.T`` so each rotation touches contiguous
    memory. Returns ``(sigma, sweeps, status)``.
    """
    g = a.T.copy()
    n = g.shape[0]
    m = g.shape[1]
    sweeps = 0
    status = 1
    for sweep in range(max_sweeps):
        sweeps = sweep + 1
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for k in range(m):
                    alpha += g[i, k] * g[i, k]
                    beta += g[j, k] * g[j, k]
                    gamma += g[i, k] * g[j, k]
                if gamma == 0.0 or abs(gamma) <= tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = 1.0 / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                if zeta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                for k in range(m):
                    gi = g[i, k]
                    gj = g[j, k]
                    g[i, k] = c * gi - s * gj
                    g[j, k] = s * gi + c * gj
        if not rotated:
            status = 0
            break
    sigma = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for k in range(m):
            acc += g[i, k] * g[i, k]
        sigma[i] = math.sqrt(acc)
    return sigma, sweeps, status


@njit
def lu_factor(a):
    """Partial-pivot LU in place. Returns ``(lu, piv, info)``.

    ``info`` is 0, or ``k + 1`` when column ``k`` has an exactly zero pivot.
    """
    lu = a.copy()
    n = lu.shape[0]
    piv = np.arange(n)
    info = 0
    for k in range(n):
        p = k
        big = abs(lu[k, k])
        for i in range(k + 1, n):
            if abs(lu[i, k]) > big:
                big = abs(lu[i, k])
                p = i
        if big == 0.0:
            if info == 0:
                info = k + 1
            continue
        if p != k:
            for j in range(n):
                tmp = lu[k, j]
                lu[k, j] = lu[p, j]
                lu[p, j] = tmp
            tmpi = piv[k]
            piv[k] = piv[p]
            piv[p] = tmpi
        inv = 1.0 / lu[k, k]
        for i in range(k + 1, n):
            lu[i, k] *= inv
            f = lu[i, k]
            if f != 0.0:
                for j in range(k + 1, n):
                    lu[i, j] -= f * lu[k, j]
    return lu, piv, info


@njit
def lu_solve(lu, piv, b):
    """Solve with factors from :func:`lu_factor`; ``b`` is 2-D (n, nrhs)."""
    n = lu.shape[0]
    nrhs = b.shape[1]
    x = np.empty_like(b)
    for i in range(n):
        for r in range(nrhs):
            x[i, r] = b[piv[i], r]
    for i in range(n):
        for k in range(i):
            f = lu[i, k]
            if f != 0.0:
                for r in range(nrhs):
                    x[i, r] -= f * x[k, r]
    for i in range(n - 1, -1, -1):
        for k in range(i + 1, n):
            f = lu[i, k]
            if f != 0.0:
                for r in range(nrhs):
                    x[i, r] -= f * x[k, r]
        inv = 1.0 / lu[i, i]
        for r in range(nrhs):
            x[i, r] *= inv
    return x

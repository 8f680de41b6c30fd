"""Dense linear algebra used throughout the package.

Every routine dispatches to the compiled kernels in :mod:`pswfkit._jit` or to
the numpy fallback in :mod:`pswfkit._vec`; pass ``backend="numba"`` or
``backend="numpy"`` to override the process-wide choice.
"""

from dataclasses import dataclass

import numpy as np

from . import _accel, _vec
from . import tolerances as tol
from .errors import ConvergenceError, InvalidArgumentError, SingularMatrixError

if _accel.NUMBA_AVAILABLE:
    from . import _jit
else:  # pragma: no cover
    _jit = None


def kernels(backend=None):
    """Return the kernel module for ``backend`` (default: process setting)."""
    if backend is None:
        backend = _accel.backend_name()
    if backend == "numba":
        if _jit is None:
            raise InvalidArgumentError("numba backend requested but numba is not installed")
        return _jit
    if backend == "numpy":
        return _vec
    raise InvalidArgumentError(f"unknown backend {backend!r}")


@dataclass(frozen=True)
class IterStats:
    iterations: int
    final_residual: float
    converged: bool


def _square(A):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidArgumentError("matrix has non-finite entries")
    return A


class LUFactor:
    """Partial-pivot LU factorization that can be reused for several solves."""

    def __init__(self, A, backend=None):
        A = _square(A)
        dtype = np.complex128 if np.iscomplexobj(A) else np.float64
        self._k = kernels(backend)
        self.n = A.shape[0]
        self.dtype = dtype
        lu, piv, info = self._k.lu_factor(np.ascontiguousarray(A, dtype=dtype))
        amax = np.abs(A).max() if A.size else 0.0
        udiag = np.abs(np.diag(lu))
        if info != 0 or amax == 0.0 or udiag.min() <= tol.SINGULAR_RTOL * amax:
            raise SingularMatrixError("matrix is singular to working precision")
        self.lu = lu
        self.piv = piv

    def solve(self, B):
        B = np.asarray(B)
        vec = B.ndim == 1
        if B.shape[0] != self.n:
            raise InvalidArgumentError("right-hand side is not conformal")
        dtype = np.result_type(self.dtype, B.dtype, np.float64)
        lu = self.lu.astype(dtype, copy=False)
        B2 = np.ascontiguousarray(B.reshape(self.n, -1), dtype=dtype)
        X = self._k.lu_solve(lu, self.piv, B2)
        return X[:, 0] if vec else X


def lu_solve(A, B, backend=None):
    """Solve ``A X = B`` by LU with partial pivoting."""
    return LUFactor(A, backend=backend).solve(B)


def tridiag_eig(diag, offdiag, backend=None):
    """All eigenpairs of a symmetric tridiagonal matrix.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    V : ndarray
        ``V[:, i]`` is the unit eigenvector of ``w[i]``.
    """
    d = np.ascontiguousarray(diag, dtype=float)
    e = np.ascontiguousarray(offdiag, dtype=float)
    if e.size != max(d.size - 1, 0):
        raise InvalidArgumentError("offdiag must have len(diag) - 1 entries")
    w, Z, status = kernels(backend).tridiag_ql(d, e, tol.QL_MAX_ITER)
    if status:
        raise ConvergenceError(f"QL did not converge for eigenvalue {status - 1}")
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(Z[order].T)


def dense_eig(A, balance=True, backend=None):
    """Eigenvalues of a real square matrix (Hessenberg + Francis QR)."""
    A = _square(A)
    if np.iscomplexobj(A):
        raise InvalidArgumentError("dense_eig expects a real matrix")
    n = A.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)
    k = kernels(backend)
    if k is _vec:
        wr, wi, status = _vec.dense_eigvals(A, balance, 0)
    else:
        H = np.array(A, dtype=float, order="C")
        if balance:
            k.balance(H)
        k.hessenberg(H)
        wr, wi, status = k.hqr(H, tol.HQR_ITER_FACTOR * n)
    if status:
        raise ConvergenceError("QR iteration did not converge")
    return wr + 1j * wi


def singular_values(A, backend=None):
    A = np.asarray(A)
    if np.iscomplexobj(A):
        # real embedding duplicates each singular value
        A = np.block([[A.real, -A.imag], [A.imag, A.real]])
    A = np.ascontiguousarray(A, dtype=float)
    s, _, status = kernels(backend).jacobi_singular_values(
        A, tol.JACOBI_TOL, tol.JACOBI_MAX_SWEEPS)
    if status:
        raise ConvergenceError("one-sided Jacobi did not converge")
    return np.sort(s)[::-1]


def cond2(A, backend=None):
    """2-norm condition number; ``inf`` when the matrix is singular."""
    A = _square(A)
    s = singular_values(A, backend=backend)
    if s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])


def _as_operator(A):
    if callable(A):
        return A
    A = np.asarray(A)
    return lambda v: A @ v


def bicgstab(A, b, tol=tol.BICGSTAB_TOL, maxit=None, x0=None, M=None):
    """BiCGStab for ``A x = b``.

    Parameters
    ----------
    A : array_like or callable
        Matrix or matrix-vector product.
    M : callable, optional
        Right preconditioner ``v -> M^{-1} v``; the returned ``x`` solves the
        original system.

    Returns
    -------
    x : ndarray
    stats : IterStats
        ``iterations`` counts completed BiCGStab iterations; convergence
        detected at the intermediate half step does not count that iteration.
    """
    if tol <= 0:
        raise InvalidArgumentError("tol must be positive")
    op = _as_operator(A)
    b = np.asarray(b)
    n = b.shape[0]
    if maxit is None:
        maxit = 2 * n * n
    prec = M if M is not None else (lambda v: v)
    dtype = np.result_type(b.dtype, np.float64)
    x = np.zeros(n, dtype=dtype) if x0 is None else np.array(x0, dtype=dtype)
    x = x.astype(np.result_type(x, op(x)), copy=False)
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return np.zeros_like(x), IterStats(0, 0.0, True)
    r = b - op(x)
    res = np.linalg.norm(r) / bnorm
    if res <= tol:
        return x, IterStats(0, float(res), True)

    rhat = r.copy()
    restarted = False
    rho_old = alpha = omega = 1.0
    v = p = None
    fresh = True
    it = 0
    while it < maxit:
        rho = np.vdot(rhat, r)
        if abs(rho) <= 1e-15 * np.linalg.norm(rhat) * np.linalg.norm(r) or omega == 0.0:
            if restarted:
                return x, IterStats(it, float(res), False)
            # restart with a perturbed shadow vector
            restarted = True
            rng = np.random.default_rng(0)
            rhat = r + 1e-3 * np.linalg.norm(r) / np.sqrt(n) * rng.standard_normal(n)
            rho_old = alpha = omega = 1.0
            fresh = True
            continue
        if fresh:
            p = r.copy()
            fresh = False
        else:
            beta = (rho / rho_old) * (alpha / omega)
            p = r + beta * (p - omega * v)
        phat = prec(p)
        v = op(phat)
        denom = np.vdot(rhat, v)
        if denom == 0.0:
            omega = 0.0
            continue
        alpha = rho / denom
        s = r - alpha * v
        res = np.linalg.norm(s) / bnorm
        if res <= tol:
            x = x + alpha * phat
            return x, IterStats(it, float(res), True)
        shat = prec(s)
        t = op(shat)
        tt = np.vdot(t, t)
        omega = np.vdot(t, s) / tt if tt != 0 else 0.0
        x = x + alpha * phat + omega * shat
        r = s - omega * t
        rho_old = rho
        it += 1
        res = np.linalg.norm(r) / bnorm
        if res <= tol:
            return x, IterStats(it, float(res), True)
    return x, IterStats(it, float(res), False)

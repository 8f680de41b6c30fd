"""Prolate spheroidal wave functions of order zero.

``psi_n(x; c)`` is expanded in orthonormal Legendre polynomials
``Pbar_k = sqrt(k + 1/2) P_k``. In that basis the prolate differential
operator is pentadiagonal and decouples by parity into two symmetric
tridiagonal matrices, whose eigenvectors are the expansion coefficients.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from . import tolerances as tol
from .errors import InvalidArgumentError, TruncationError


@dataclass(frozen=True)
class ProlateParams:
    c: float
    N: int
    M: int

    def __post_init__(self):
        if not (self.c >= 0.0 and math.isfinite(self.c)):
            raise InvalidArgumentError(f"bandwidth c must be >= 0, got {self.c}")
        if self.N < 1:
            raise InvalidArgumentError(f"N must be >= 1, got {self.N}")
        if self.M < self.N + 1:
            raise InvalidArgumentError("truncation M must be at least N + 1")


@dataclass(frozen=True, eq=False)
class ProlateBasis:
    """Coefficients of ``psi_0 .. psi_N`` and their eigenvalues ``chi``.

    Row ``n`` of ``coeffs`` holds the orthonormal-Legendre coefficients of
    ``psi_n``; it has unit norm, parity ``(-1)^n`` and a positive entry at
    index ``n``.
    """

    params: ProlateParams
    coeffs: np.ndarray
    chi: np.ndarray

    def __post_init__(self):
        self.coeffs.setflags(write=False)
        self.chi.setflags(write=False)

    @property
    def c(self):
        return self.params.c

    @property
    def N(self):
        return self.params.N

    @property
    def M(self):
        return self.params.M

    def values(self, x, m=0, modes=None):
        """Matrix ``V[i, n] = psi_n^{(m)}(x_i)`` for ``n`` in ``modes``."""
        x = _check_points(x)
        C = self.coeffs if modes is None else self.coeffs[modes]
        table = linalg.kernels().legendre_table(x, self.M, m)[m]
        return table @ C.T

    def integrals(self):
        """``mu_n = int_{-1}^{1} psi_n``; only ``Pbar_0`` contributes."""
        return math.sqrt(2.0) * self.coeffs[:, 0]

    def to_json(self):
        return json.dumps({
            "c": self.c,
            "N": self.N,
            "M": self.M,
            "chi": self.chi.tolist(),
            "coeffs": self.coeffs.tolist(),
        })

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        params = ProlateParams(float(d["c"]), int(d["N"]), int(d["M"]))
        return cls(params, np.array(d["coeffs"], dtype=float),
                   np.array(d["chi"], dtype=float))


def _check_points(x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1:
        x = x.ravel()
    if np.any(np.abs(x) > 1.0 + 1e-14):
        raise InvalidArgumentError("evaluation points must lie in [-1, 1]")
    return np.ascontiguousarray(np.clip(x, -1.0, 1.0))


def _alpha(M):
    k = np.arange(M, dtype=float)
    return (k + 1.0) / np.sqrt((2.0 * k + 1.0) * (2.0 * k + 3.0))


def prolate_matrix_bands(c, M):
    """Diagonal and distance-2 band of the prolate operator in ``Pbar_k``.

    Returns ``(diag, band)`` with ``band[k]`` the ``(k, k+2)`` entry.
    """
    k = np.arange(M, dtype=float)
    a = _alpha(M + 1)
    a_prev = np.concatenate(([0.0], a[:M - 1]))
    diag = k * (k + 1.0) + c * c * (a[:M] ** 2 + a_prev ** 2)
    band = c * c * a[:M - 2] * a[1:M - 1]
    return diag, band


def _solve_truncated(c, N, M):
    diag, band = prolate_matrix_bands(c, M)
    vals, vecs = [], []
    for p in (0, 1):
        idx = np.arange(p, M, 2)
        w, V = linalg.tridiag_eig(diag[idx], band[idx[:-1]])
        vals.append(w)
        vecs.append((idx, V))
    allw = np.concatenate(vals)
    src = np.concatenate([np.zeros(vals[0].size, int), np.ones(vals[1].size, int)])
    col = np.concatenate([np.arange(vals[0].size), np.arange(vals[1].size)])
    order = np.argsort(allw, kind="stable")[: N + 1]
    coeffs = np.zeros((N + 1, M))
    for n, j in enumerate(order):
        idx, V = vecs[src[j]]
        row = np.zeros(M)
        row[idx] = V[:, col[j]]
        if row[n] < 0.0:
            row = -row
        coeffs[n] = row / np.linalg.norm(row)
    return allw[order], coeffs


def build_basis(c, N):
    """Compute ``psi_0 .. psi_N`` for bandwidth ``c``.

    The truncation starts at ``M = 2 max(N, ceil c) + 60`` and doubles until
    the last two coefficients of every retained mode are below 1e-15.
    """
    if not (isinstance(c, (int, float, np.floating, np.integer)) and c >= 0
            and math.isfinite(c)):
        raise InvalidArgumentError(f"bandwidth c must be a finite number >= 0, got {c!r}")
    if int(N) != N or N < 1 or N > tol.MAX_N:
        raise InvalidArgumentError(f"N must be an integer in [1, {tol.MAX_N}], got {N!r}")
    c = float(c)
    N = int(N)
    base = max(N, math.ceil(c))
    M = 2 * base + 60
    limit = 4 * base + 200
    while M <= limit:
        chi, coeffs = _solve_truncated(c, N, M)
        if np.abs(coeffs[:, -2:]).max() < tol.TAIL_TOL:
            return ProlateBasis(ProlateParams(c, N, M), coeffs, chi)
        M *= 2
    raise TruncationError(f"Legendre tails did not decay below {tol.TAIL_TOL} "
                          f"for c={c}, N={N} with M <= {limit}")


def _check_mode(basis, n):
    if int(n) != n or not 0 <= n <= basis.N:
        raise InvalidArgumentError(f"mode index {n!r} outside [0, {basis.N}]")
    return int(n)


def eval_psi(basis, n, x, m=0):
    """``psi_n^{(m)}(x; c)`` for ``m`` in {0, 1, 2}; scalar in, scalar out."""
    n = _check_mode(basis, n)
    if m not in (0, 1, 2):
        raise InvalidArgumentError("derivative order must be 0, 1 or 2")
    scalar = np.ndim(x) == 0
    pts = _check_points(x)
    out = linalg.kernels().legendre_series(
        np.ascontiguousarray(basis.coeffs[n]), pts, m)
    return float(out[0]) if scalar else out


def lambda_n(basis, n):
    """Modulus of the finite-Fourier-transform eigenvalue of ``psi_n``.

    Relative accuracy is about 1e-3 while the value exceeds 1e-13; below
    that the quadrature cancels in binary64 and only the magnitude is
    meaningful.
    """
    from .quadrature import gauss_legendre

    n = _check_mode(basis, n)
    c = basis.c
    if c == 0.0:
        # limit c -> 0: only psi_0 has a nonzero integral
        return 2.0 if n == 0 else 0.0
    scan = np.linspace(0.0, 1.0, 33)
    vals = np.abs(eval_psi(basis, n, scan))
    x0 = scan[int(np.argmax(vals))]
    npts = max(basis.M, math.ceil(c)) + 40
    t, w = gauss_legendre(npts)
    psi_t = eval_psi(basis, n, t)
    integral = np.sum(w * np.exp(1j * c * x0 * t) * psi_t)
    return float(abs(integral) / vals.max())


def lambda_upper_bound(c, n):
    """Uniform bound ``sqrt(pi) c^n (n!)^2 / ((2n)! Gamma(n + 3/2))`` on ``lambda_n``."""
    if c <= 0.0:
        return 0.0 if n > 0 else 2.0
    lg = (0.5 * math.log(math.pi) + n * math.log(c) + 2.0 * math.lgamma(n + 1)
          - math.lgamma(2 * n + 1) - math.lgamma(n + 1.5))
    return math.exp(lg) if lg > -745.0 else 0.0

"""Birkhoff-type basis interpolating second derivatives at interior nodes.

For ``n = 0..N-2`` let ``phi_n`` solve ``phi_n'' = psi_n`` with
``phi_n(+-1) = 0``. The interior basis functions are
``beta_k = sum_n A[n, k] phi_n`` with ``A = Psibar^{-1}`` and
``Psibar[j, n] = psi_n(x_j)`` over interior nodes, so ``beta_k''(x_j) = delta_jk``.
The endpoint functions are the hats ``(1 -+ x)/2``.

All ``phi_n`` are kept as orthonormal-Legendre coefficient rows, so their
values and derivatives go through the same recurrences as ``psi_n``.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg

from . import linalg
from .errors import InvalidArgumentError, SingularMatrixError


def _scale(M):
    # Pbar_k = s_k P_k
    return np.sqrt(np.arange(M) + 0.5)


def build_phi(basis):
    """Orthonormal-Legendre coefficients of ``phi_0 .. phi_{N-2}``.

    Returns an ``(N-1, M+2)`` array; two extra columns hold the degrees
    gained by integrating twice.
    """
    N, M = basis.N, basis.M
    if N < 2:
        raise InvalidArgumentError("the Birkhoff basis needs N >= 2")
    s_in = _scale(M)
    s_out = _scale(M + 2)
    out = np.zeros((N - 1, M + 2))
    for n in range(N - 1):
        a = basis.coeffs[n] * s_in
        # phi'' = psi with phi(-1) = phi'(-1) = 0, then subtract the chord
        p = npleg.legint(a, m=2, lbnd=-1.0)
        top = npleg.legval(1.0, p)
        p[0] -= 0.5 * top
        p[1] -= 0.5 * top
        out[n] = p / s_out
    return out


@dataclass(frozen=True, eq=False)
class BirkhoffBasis:
    """Node matrices of ``beta_0 .. beta_N`` on a prolate-Lobatto grid.

    Attributes
    ----------
    A : ndarray, shape (N-1, N-1)
        ``beta_k = sum_n A[n, k-1] phi_n`` for ``k = 1..N-1``.
    phi_coeffs : ndarray, shape (N-1, M+2)
    B, B1 : ndarray, shape (N+1, N+1)
        ``beta_k(x_j)`` and ``beta_k'(x_j)``.
    """

    grid: object
    A: np.ndarray
    phi_coeffs: np.ndarray
    B: np.ndarray
    B1: np.ndarray

    def __post_init__(self):
        for name in ("A", "phi_coeffs", "B", "B1"):
            getattr(self, name).setflags(write=False)

    @property
    def N(self):
        return self.B.shape[0] - 1

    @property
    def Bin(self):
        return self.B[1:-1, 1:-1]

    @property
    def B1in(self):
        return self.B1[1:-1, 1:-1]

    def phi_values(self, x, m=0):
        """``phi_n^(m)(x_i)`` as an ``(len(x), N-1)`` matrix, ``m`` in {0, 1, 2}."""
        x = np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=float)))
        if np.any(np.abs(x) > 1.0 + 1e-14):
            raise InvalidArgumentError("evaluation points must lie in [-1, 1]")
        table = linalg.kernels().legendre_table(
            np.clip(x, -1.0, 1.0), self.phi_coeffs.shape[1], m)[m]
        return table @ self.phi_coeffs.T

    def values(self, x, m=0):
        """``beta_k^(m)(x_i)`` for all ``k = 0..N`` as an ``(len(x), N+1)`` matrix."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        inner = self.phi_values(x, m) @ self.A
        if m == 0:
            ends = np.column_stack([(1.0 - x) / 2.0, (1.0 + x) / 2.0])
        elif m == 1:
            ends = np.tile([-0.5, 0.5], (x.size, 1))
        else:
            ends = np.zeros((x.size, 2))
        return np.column_stack([ends[:, 0], inner, ends[:, 1]])


def build_birkhoff(basis, grid):
    """Solve for ``A`` and tabulate ``beta_k`` and ``beta_k'`` at the nodes.

    Raises
    ------
    SingularMatrixError
        If ``Psibar`` is singular, which means the grid is degenerate.
    """
    if grid.N != basis.N or grid.c != basis.c:
        raise InvalidArgumentError("grid was built for a different (c, N)")
    N = basis.N
    x = np.asarray(grid.nodes)
    psibar = basis.values(x[1:-1], modes=slice(0, N - 1))
    try:
        A = linalg.lu_solve(psibar, np.eye(N - 1))
    except SingularMatrixError as exc:
        raise SingularMatrixError("interior mode matrix is singular: degenerate grid") from exc
    phi = build_phi(basis)
    table = linalg.kernels().legendre_table(np.ascontiguousarray(x), phi.shape[1], 1)
    B = np.empty((N + 1, N + 1))
    B1 = np.empty((N + 1, N + 1))
    B[:, 1:-1] = table[0] @ phi.T @ A
    B1[:, 1:-1] = table[1] @ phi.T @ A
    B[:, 0] = (1.0 - x) / 2.0
    B[:, -1] = (1.0 + x) / 2.0
    B1[:, 0] = -0.5
    B1[:, -1] = 0.5
    return BirkhoffBasis(grid, A, phi, B, B1)


def birkhoff_interpolate(bb, u_minus, u2_interior, u_plus, x):
    """Evaluate ``u(-1) beta_0 + sum_k u''(x_k) beta_k + u(1) beta_N`` at ``x``."""
    u2 = np.asarray(u2_interior)
    if u2.shape != (bb.N - 1,):
        raise InvalidArgumentError(f"expected {bb.N - 1} interior second derivatives")
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    out = (bb.phi_values(xa) @ (bb.A @ u2)
           + u_minus * (1.0 - xa) / 2.0 + u_plus * (1.0 + xa) / 2.0)
    return out[0] if scalar else out

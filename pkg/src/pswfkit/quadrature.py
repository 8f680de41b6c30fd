"""Prolate-Lobatto grids and the Legendre rules used as baselines and oracles."""

import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg
from . import tolerances as tol
from .core import eval_psi
from .errors import InvalidArgumentError, RootCountError, SingularMatrixError


@dataclass(frozen=True, eq=False)
class ProlateGrid:
    """Prolate-Lobatto nodes ``x_0 = -1 < ... < x_N = 1`` and weights."""

    c: float
    N: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def interior(self):
        return self.nodes[1:-1]


def _legendre_pn(n, x):
    """``P_n(x)``, ``P_{n-1}(x)`` and ``P_n'(x)`` (standard normalization)."""
    p0 = np.ones_like(x)
    if n == 0:
        return p0, np.zeros_like(x), np.zeros_like(x)
    p1 = x.copy()
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, p0, dp


def gauss_legendre(n):
    """Gauss-Legendre nodes (ascending) and weights with ``n`` points."""
    if int(n) != n or not 1 <= n <= 4096:
        raise InvalidArgumentError("point count must be in [1, 4096]")
    n = int(n)
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(tol.NEWTON_MAX):
        p, _, dp = _legendre_pn(n, x)
        dx = p / dp
        x = x - dx
        if np.abs(dx).max() < 1e-16:
            break
    p, _, dp = _legendre_pn(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x = x[::-1].copy()
    w = w[::-1].copy()
    # enforce exact symmetry
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


def lgl_rule(N):
    """Legendre-Gauss-Lobatto nodes (zeros of ``(1 - x^2) P_N'``) and weights."""
    if int(N) != N or N < 1:
        raise InvalidArgumentError("N must be a positive integer")
    N = int(N)
    x = -np.cos(np.pi * np.arange(N + 1) / N)
    for _ in range(tol.NEWTON_MAX):
        p, pm1, _ = _legendre_pn(N, x)
        dx = (x * p - pm1) / ((N + 1) * p)
        x = x - dx
        if np.abs(dx).max() < 1e-16:
            break
    x[0], x[-1] = -1.0, 1.0
    x = 0.5 * (x - x[::-1])
    p, _, _ = _legendre_pn(N, x)
    w = 2.0 / (N * (N + 1) * p * p)
    return x, w


def pl_points(basis):
    """``-1``, ``+1`` and the ``N - 1`` zeros of ``psi_N'`` in ascending order.

    Roots are bracketed on a Chebyshev scan of ``20 N`` points and polished by
    Newton's method with bisection safeguarding.
    """
    N = basis.N
    n_scan = tol.SCAN_FACTOR * N
    t = -np.cos(np.pi * (np.arange(n_scan) + 0.5) / n_scan)
    d = eval_psi(basis, N, t, 1)
    scale = max(np.abs(d).max(), abs(eval_psi(basis, N, 1.0, 1)))
    flips = np.nonzero(np.signbit(d[:-1]) != np.signbit(d[1:]))[0]
    if flips.size != N - 1:
        raise RootCountError(f"found {flips.size} sign changes of psi_N', expected {N - 1}")
    lo = t[flips].copy()
    hi = t[flips + 1].copy()
    f_lo = d[flips].copy()
    x = 0.5 * (lo + hi)
    for _ in range(tol.NEWTON_MAX):
        f = eval_psi(basis, N, x, 1)
        fp = eval_psi(basis, N, x, 2)
        same = np.signbit(f) == np.signbit(f_lo)
        lo = np.where(same, x, lo)
        f_lo = np.where(same, f, f_lo)
        hi = np.where(same, hi, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_new = x - f / fp
        bad = ~((x_new > np.minimum(lo, hi)) & (x_new < np.maximum(lo, hi)))
        x_new = np.where(bad, 0.5 * (lo + hi), x_new)
        step = np.abs(x_new - x)
        x = x_new
        if step.max() < tol.ROOT_XTOL and np.abs(f).max() < tol.ROOT_FTOL * scale:
            break
    interior = 0.5 * (x - x[::-1])
    return np.concatenate(([-1.0], interior, [1.0]))


def pl_weights(basis, nodes):
    """Weights making the rule exact on ``psi_0 .. psi_N``.

    Solves ``sum_j psi_n(x_j) w_j = int psi_n`` for ``n = 0..N``.
    """
    nodes = np.asarray(nodes, dtype=float)
    if nodes.size != basis.N + 1:
        raise InvalidArgumentError("expected N + 1 nodes")
    Psi = basis.values(nodes)
    try:
        w = linalg.lu_solve(Psi.T, basis.integrals())
    except SingularMatrixError as exc:
        raise SingularMatrixError("moment system is singular; check the nodes") from exc
    w = 0.5 * (w + w[::-1])
    if np.any(w <= 0.0):
        warnings.warn(f"non-positive prolate-Lobatto weight for c={basis.c}, N={basis.N}",
                      RuntimeWarning, stacklevel=2)
    return w


def prolate_grid(basis):
    """Nodes and weights bundled as a :class:`ProlateGrid`."""
    x = pl_points(basis)
    return ProlateGrid(basis.c, basis.N, x, pl_weights(basis, x))


def spacing_ratio(nodes):
    """Max gap over min gap, a crude uniformity measure."""
    gaps = np.diff(np.asarray(nodes))
    return float(gaps.max() / gaps.min())


__all__ = ["ProlateGrid", "gauss_legendre", "lgl_rule", "pl_points", "pl_weights",
           "prolate_grid", "spacing_ratio"]

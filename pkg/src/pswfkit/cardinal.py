"""Cardinal bases on the prolate-Lobatto grid and their differentiation matrices.

Two constructions are provided:

* modal: ``h_k`` spans ``{psi_0, .., psi_N}``, so ``D^(m) = Psi^(m) Psi^{-1}``;
* rational: ``l_k(x) = s(x) / (s'(x_k) (x - x_k))`` with
  ``s(x) = (1 - x^2) psi_N'(x)``, whose derivatives at the nodes have closed
  forms in ``psi_N(x_j)``, ``chi_N`` and ``c`` only.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg
from . import tolerances as tol
from .errors import IllConditionedError, InvalidArgumentError


@dataclass(frozen=True, eq=False)
class DiffOperators:
    """Node-value matrices of the prolate basis and both cardinal families."""

    grid: object
    Psi: np.ndarray
    Psi1: np.ndarray
    Psi2: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    Dh1: np.ndarray
    Dh2: np.ndarray
    q: float

    def __post_init__(self):
        for name in ("Psi", "Psi1", "Psi2", "D1", "D2", "Dh1", "Dh2"):
            getattr(self, name).setflags(write=False)

    def interior(self, name):
        """Interior ``(N-1) x (N-1)`` block of matrix ``name``."""
        return getattr(self, name)[1:-1, 1:-1]


def q_ratio(basis):
    """``c / sqrt(chi_N)``; below ``2^(-1/6)`` the pair is comfortably admissible."""
    return basis.c / math.sqrt(basis.chi[-1])


def _check_grid(basis, grid):
    if grid.N != basis.N or grid.c != basis.c:
        raise InvalidArgumentError("grid was built for a different (c, N)")


def modal_matrices(basis, grid):
    """``Psi``, ``Psi^(1)``, ``Psi^(2)`` with entries ``psi_k^(m)(x_j)``."""
    _check_grid(basis, grid)
    table = linalg.kernels().legendre_table(
        np.ascontiguousarray(grid.nodes), basis.M, 2)
    C = basis.coeffs.T
    return table[0] @ C, table[1] @ C, table[2] @ C


def modal_diffmats(basis, grid, _psi=None):
    """``D^(1)`` and ``D^(2)`` of the modal cardinal basis.

    ``Psi^T X^T = (Psi^(m))^T`` is solved by LU; ``Psi`` is never inverted.

    Raises
    ------
    IllConditionedError
        If the 1-norm condition number of ``Psi`` exceeds 1e14, which happens
        as ``c`` approaches the transition bandwidth.
    """
    Psi, Psi1, Psi2 = _psi if _psi is not None else modal_matrices(basis, grid)
    q = q_ratio(basis)
    if q >= tol.Q_ADMISSIBLE:
        warnings.warn(f"q = c/sqrt(chi_N) = {q:.4f} exceeds {tol.Q_ADMISSIBLE:.4f}; "
                      "interpolation accuracy may degrade", RuntimeWarning, stacklevel=2)
    lu = linalg.LUFactor(Psi.T)
    n = Psi.shape[0]
    inv_t = lu.solve(np.eye(n))
    cond1 = np.abs(Psi).sum(axis=0).max() * np.abs(inv_t).sum(axis=1).max()
    if cond1 > tol.ILL_COND_LIMIT:
        raise IllConditionedError(
            f"Psi is ill-conditioned (cond_1 ~ {cond1:.2e}, q = {q:.4f})", q=q, cond=cond1)
    X = lu.solve(np.hstack([Psi1.T, Psi2.T]))
    return np.ascontiguousarray(X[:, :n].T), np.ascontiguousarray(X[:, n:].T)


def rational_diffmats(basis, grid):
    """``l_k'(x_j)`` and ``l_k''(x_j)`` of the rational cardinal basis."""
    from .core import eval_psi

    _check_grid(basis, grid)
    x = np.asarray(grid.nodes)
    N = basis.N
    c2 = basis.c ** 2
    chi = float(basis.chi[-1])
    q2 = c2 / chi
    psi = eval_psi(basis, N, x)
    if np.any(np.abs(psi) < tol.NODE_VALUE_RTOL * np.abs(psi).max()):
        raise InvalidArgumentError("psi_N vanishes at a node; rational basis undefined")

    # s'(x_j) / chi = (q^2 x_j^2 - 1) psi_N(x_j)
    sp = (q2 * x * x - 1.0) * psi
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    D1 = sp[:, None] / (sp[None, :] * diff)

    d1 = q2 * x / (q2 * x * x - 1.0)
    corner = q2 / (q2 - 1.0) - chi * (q2 - 1.0) / 4.0
    d1[0], d1[-1] = -corner, corner
    np.fill_diagonal(D1, d1)

    # s''(x_j); interior nodes use psi_N'(x_j) = 0
    spp = 2.0 * c2 * x * psi
    spp[0] = (-2.0 * c2 + 0.5 * (c2 - chi) ** 2) * psi[0]
    spp[-1] = (2.0 * c2 - 0.5 * (c2 - chi) ** 2) * psi[-1]
    D2 = (spp[:, None] / (chi * sp[None, :]) - 2.0 * D1) / diff

    xi = x[1:-1]
    d2 = np.empty(N + 1)
    d2[1:-1] = (2.0 / 3.0) * q2 / (q2 * xi * xi - 1.0) \
        + (chi / 3.0) * (q2 * xi * xi - 1.0) / ((1.0 - xi) * (1.0 + xi))
    end = 2.0 * q2 / (3.0 * (q2 - 1.0)) + (c2 - chi + 1.0) ** 2 / 24.0 \
        - 5.0 * c2 / 6.0 - 1.0 / 24.0
    d2[0] = d2[-1] = end
    np.fill_diagonal(D2, d2)
    return D1, D2


def diff_operators(basis, grid, rational=True):
    """Assemble a :class:`DiffOperators` bundle.

    With ``rational=False`` the ``Dh`` fields are filled with NaN, which
    saves the extra ``psi_N`` evaluations when only modal matrices are used.
    """
    mats = modal_matrices(basis, grid)
    D1, D2 = modal_diffmats(basis, grid, _psi=mats)
    if rational:
        Dh1, Dh2 = rational_diffmats(basis, grid)
    else:
        Dh1 = np.full_like(D1, np.nan)
        Dh2 = np.full_like(D2, np.nan)
    return DiffOperators(grid, *mats, D1, D2, Dh1, Dh2, q_ratio(basis))

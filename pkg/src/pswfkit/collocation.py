"""Single-domain collocation for ``u'' + p u' + q u = f`` on (-1, 1).

Three schemes share the prolate-Lobatto grid:

``PCOL``
    plain collocation with the modal differentiation matrices;
``P-PCOL``
    the same system left-multiplied by the Birkhoff block ``Bin``;
``N-PCOL``
    collocation in the Birkhoff basis, whose second-derivative block is the
    identity, so no differentiation matrix is needed.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import linalg
from .errors import InvalidArgumentError

SCHEMES = ("PCOL", "P-PCOL", "N-PCOL")


@dataclass(frozen=True)
class Bvp2:
    """Dirichlet problem ``u'' + p u' + q u = f``, ``u(-1) = u_minus``, ``u(1) = u_plus``."""

    p: Callable
    q: Callable
    f: Callable
    u_minus: complex
    u_plus: complex
    exact: Optional[Callable] = None


@dataclass(frozen=True)
class SolveReport:
    scheme: str
    x: np.ndarray
    u: np.ndarray
    cond: float
    stats: Optional[linalg.IterStats]
    max_error: Optional[float]
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        d = {
            "scheme": self.scheme,
            "cond": self.cond,
            "max_error": self.max_error,
            "iterations": None if self.stats is None else self.stats.iterations,
            "converged": None if self.stats is None else self.stats.converged,
            "final_residual": None if self.stats is None else self.stats.final_residual,
            "x": self.x.tolist(),
        }
        if np.iscomplexobj(self.u):
            d["u_real"] = self.u.real.tolist()
            d["u_imag"] = self.u.imag.tolist()
        else:
            d["u"] = self.u.tolist()
        d.update(self.extra)
        return d


def _coef(fn, x):
    return np.broadcast_to(np.asarray(fn(x)), x.shape).copy()


def _solve(A, b, solver):
    if solver == "direct":
        return linalg.lu_solve(A, b), None
    if solver == "iterative":
        n = A.shape[0]
        return linalg.bicgstab(A, b, maxit=2 * n * n)
    raise InvalidArgumentError(f"unknown solver {solver!r}")


def _report(scheme, prob, x, u, A, stats, compute_cond):
    cond = linalg.cond2(A) if compute_cond else float("nan")
    err = None
    if prob.exact is not None:
        err = float(np.abs(u - prob.exact(x)).max())
    return SolveReport(scheme, x, u, cond, stats, err)


def _check(basis, grid):
    if basis.N < 3:
        raise InvalidArgumentError("collocation needs N >= 3")
    if grid.N != basis.N:
        raise InvalidArgumentError("grid and basis disagree on N")


def _pcol_system(prob, grid, ops):
    x = np.asarray(grid.nodes)
    xi = x[1:-1]
    p = _coef(prob.p, xi)
    q = _coef(prob.q, xi)
    f = _coef(prob.f, xi)
    D1, D2 = ops.D1, ops.D2
    A = D2[1:-1, 1:-1] + p[:, None] * D1[1:-1, 1:-1] + np.diag(q)
    g = (f - prob.u_minus * (D2[1:-1, 0] + p * D1[1:-1, 0])
         - prob.u_plus * (D2[1:-1, -1] + p * D1[1:-1, -1]))
    return x, A, g


def _assemble_nodes(prob, x, interior):
    u = np.empty(x.size, dtype=np.result_type(interior, prob.u_minus, prob.u_plus))
    u[0], u[-1] = prob.u_minus, prob.u_plus
    u[1:-1] = interior
    return u


def solve_pcol(prob, basis, grid, ops, solver="direct", compute_cond=True):
    """Plain prolate collocation; ill-conditioned for large ``N``."""
    _check(basis, grid)
    x, A, g = _pcol_system(prob, grid, ops)
    ui, stats = _solve(A, g, solver)
    return _report("PCOL", prob, x, _assemble_nodes(prob, x, ui), A, stats, compute_cond)


def solve_ppcol(prob, basis, grid, ops, bb, solver="direct", compute_cond=True):
    """PCOL preconditioned on the left by ``Bin``."""
    _check(basis, grid)
    x, A, g = _pcol_system(prob, grid, ops)
    PA = bb.Bin @ A
    ui, stats = _solve(PA, bb.Bin @ g, solver)
    return _report("P-PCOL", prob, x, _assemble_nodes(prob, x, ui), PA, stats, compute_cond)


def solve_npcol(prob, basis, grid, bb, solver="direct", compute_cond=True):
    """Collocation in the Birkhoff basis.

    Solves ``(I + diag(p) B1in + diag(q) Bin) w = h`` for the interior
    second derivatives ``w`` and recovers ``u = Bin w + affine part``.
    """
    _check(basis, grid)
    x = np.asarray(grid.nodes)
    xi = x[1:-1]
    p = _coef(prob.p, xi)
    q = _coef(prob.q, xi)
    f = _coef(prob.f, xi)
    um, up = prob.u_minus, prob.u_plus
    A = np.eye(xi.size) + p[:, None] * bb.B1in + q[:, None] * bb.Bin
    h = f - (p + xi * q) * (up - um) / 2.0 - q * (up + um) / 2.0
    w, stats = _solve(A, h, solver)
    ui = bb.Bin @ w + um * (1.0 - xi) / 2.0 + up * (1.0 + xi) / 2.0
    return _report("N-PCOL", prob, x, _assemble_nodes(prob, x, ui), A, stats, compute_cond)


def model_problem():
    """``u'' - x u' - u = f`` with a right-hand side that jumps at ``x = 0``.

    The exact solution is ``C^3`` but not ``C^4`` at the origin, which caps
    the algebraic convergence rate of every scheme.
    """
    def exact(x):
        x = np.asarray(x, dtype=float)
        g = np.exp(x * x / 2.0)
        return np.where(x < 0.0, np.e * g + g, np.e * g + x * x / 2.0 + 1.0)

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 0.0, 0.0, -1.5 * x * x)

    return Bvp2(p=lambda x: -x, q=lambda x: -np.ones_like(x), f=f,
                u_minus=float(exact(-1.0)), u_plus=float(exact(1.0)), exact=exact)

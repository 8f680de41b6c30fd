"""Multi-element discretizations on a uniform mesh of (a, b).

* :func:`hp_project` applies the element-wise L2 projection onto
  ``span{psi_0, .., psi_N}``.
* :func:`solve_sem` is a C0 spectral-element Galerkin method built on a
  nodal cardinal basis (Legendre when ``c = 0``).
* :func:`solve_prolate_element` is the p-version scheme: collocation in the
  Birkhoff basis at interior nodes plus a Galerkin equation for each
  joint hat function.

All solvers take an :class:`ElementProblem`,
``-(p u')' + r u' + q u = f`` with coefficients given piecewise.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import linalg
from .collocation import SolveReport
from .errors import InvalidArgumentError
from .quadrature import gauss_legendre


def _zero(x):
    return np.zeros(np.shape(x))


@dataclass(frozen=True)
class Mesh1D:
    a: float
    b: float
    M: int

    def __post_init__(self):
        if not self.b > self.a:
            raise InvalidArgumentError("mesh needs b > a")
        if int(self.M) != self.M or self.M < 1:
            raise InvalidArgumentError("mesh needs M >= 1 elements")

    @property
    def h(self):
        return (self.b - self.a) / self.M

    @property
    def breakpoints(self):
        return self.a + self.h * np.arange(self.M + 1)

    def to_physical(self, i, y):
        """Map reference ``y`` in (-1, 1) into element ``i`` (0-based)."""
        return self.a + self.h * (i + 0.5) + 0.5 * self.h * np.asarray(y)

    def locate(self, x):
        """Element index and reference coordinate of each physical point."""
        x = np.asarray(x, dtype=float)
        i = np.clip(np.floor((x - self.a) / self.h).astype(int), 0, self.M - 1)
        y = 2.0 * (x - self.a - self.h * i) / self.h - 1.0
        return i, np.clip(y, -1.0, 1.0)


@dataclass(frozen=True)
class Piece:
    """Coefficients on one smooth piece; ``dp`` is needed only by collocation."""

    p: Callable
    q: Callable
    f: Callable
    dp: Callable = _zero
    r: Callable = _zero


@dataclass(frozen=True)
class ElementProblem:
    """``-(p u')' + r u' + q u = f`` on (a, b) with ``u(a) = u_a``.

    At ``b`` either ``u(b) = u_b`` (``right="dirichlet"``) or the Robin
    condition ``u'(b) = gamma u(b)`` (``right="robin"``).
    """

    a: float
    b: float
    breaks: Sequence[float]
    pieces: Sequence[Piece]
    u_a: complex
    right: str = "dirichlet"
    u_b: complex = 0.0
    gamma: complex = 0.0
    exact: Optional[Callable] = None
    complex_valued: bool = False

    def __post_init__(self):
        if len(self.breaks) != len(self.pieces) + 1:
            raise InvalidArgumentError("need one more breakpoint than pieces")
        if self.right not in ("dirichlet", "robin"):
            raise InvalidArgumentError("right boundary must be 'dirichlet' or 'robin'")

    def piece_map(self, mesh):
        """Piece index for every element; coefficient breaks must be mesh nodes."""
        if not (math.isclose(mesh.a, self.a) and math.isclose(mesh.b, self.b)):
            raise InvalidArgumentError("mesh and problem live on different intervals")
        nodes = mesh.breakpoints
        for t in self.breaks:
            if np.abs(nodes - t).min() > 1e-12 * (1.0 + abs(t)):
                raise InvalidArgumentError(f"coefficient breakpoint {t} is not a mesh node")
        mids = nodes[:-1] + 0.5 * mesh.h
        return np.searchsorted(np.asarray(self.breaks), mids) - 1


@dataclass(frozen=True)
class ElementReport(SolveReport):
    """A :class:`SolveReport` plus an evaluator of the discrete solution."""

    evaluate: Optional[Callable] = field(default=None, compare=False)
    dofs: int = 0

    def to_dict(self):
        d = super().to_dict()
        d["dofs"] = self.dofs
        return d


def _dtype(problem):
    return np.complex128 if problem.complex_valued else np.float64


def _eval(fn, x, dtype):
    return np.broadcast_to(np.asarray(fn(x), dtype=dtype), x.shape)


def _gauss_points(basis):
    return gauss_legendre(2 * basis.M + 40)


def _sample_error(problem, evaluate, n_samples=1000):
    if problem.exact is None:
        return None
    xs = np.linspace(problem.a, problem.b, n_samples)
    return float(np.abs(evaluate(xs) - problem.exact(xs)).max())


# ---------------------------------------------------------------- projection

@dataclass(frozen=True, eq=False)
class HpProjection:
    mesh: Mesh1D
    basis: object
    coeffs: np.ndarray
    l2_error: float

    def evaluate(self, x):
        i, y = self.mesh.locate(x)
        V = self.basis.values(y)
        return np.einsum("ij,ij->i", V, self.coeffs[i])


def hp_project(u, mesh, basis):
    """Element-wise L2 projection of ``u`` onto the prolate space.

    Returns an :class:`HpProjection` whose ``l2_error`` is the broken L2
    norm of ``pi u - u`` over (a, b).
    """
    y, w = _gauss_points(basis)
    V = basis.values(y)
    coeffs = np.empty((mesh.M, basis.N + 1))
    err2 = 0.0
    for i in range(mesh.M):
        ui = np.broadcast_to(np.asarray(u(mesh.to_physical(i, y)), dtype=float), y.shape)
        coeffs[i] = V.T @ (w * ui)
        err2 += 0.5 * mesh.h * float(w @ (V @ coeffs[i] - ui) ** 2)
    return HpProjection(mesh, basis, coeffs, math.sqrt(err2))


# ----------------------------------------------------------- Galerkin SEM

def _cardinal_tables(basis, grid, y):
    """Values and derivatives of the modal cardinal functions at ``y``."""
    Psi = basis.values(grid.nodes)
    lu = linalg.LUFactor(Psi.T)
    H = lu.solve(basis.values(y).T).T
    H1 = lu.solve(basis.values(y, 1).T).T
    return H, H1


def solve_sem(problem, mesh, basis, grid, quadrature="pl"):
    """C0 spectral-element Galerkin solve with a nodal cardinal basis.

    Parameters
    ----------
    quadrature : {"gauss", "pl"}
        ``"pl"`` (default) uses the prolate-Lobatto rule on the element
        nodes, which is the LGL rule when ``c = 0`` and is inexact for
        products of prolate functions when ``c > 0``. ``"gauss"`` integrates
        the bilinear form with ``2 M + 40`` Gauss-Legendre points per element
        (``M`` the Legendre truncation of the basis).

    Returns
    -------
    ElementReport
        ``max_error`` is taken at the global nodes.
    """
    N = basis.N
    pmap = problem.piece_map(mesh)
    dtype = _dtype(problem)
    if quadrature == "gauss":
        y, wq = _gauss_points(basis)
        H, H1 = _cardinal_tables(basis, grid, y)
    elif quadrature == "pl":
        from .cardinal import modal_diffmats

        y = np.asarray(grid.nodes)
        wq = np.asarray(grid.weights)
        H = np.eye(N + 1)
        H1 = modal_diffmats(basis, grid)[0]
    else:
        raise InvalidArgumentError(f"unknown quadrature {quadrature!r}")

    J = 0.5 * mesh.h
    n = mesh.M * N + 1
    K = np.zeros((n, n), dtype=dtype)
    F = np.zeros(n, dtype=dtype)
    Hx = H1 / J
    for i in range(mesh.M):
        pc = problem.pieces[pmap[i]]
        xs = mesh.to_physical(i, y)
        W = wq * J
        p = _eval(pc.p, xs, dtype)
        r = _eval(pc.r, xs, dtype)
        q = _eval(pc.q, xs, dtype)
        f = _eval(pc.f, xs, dtype)
        # rows index the test function
        Ke = (Hx.T @ ((W * p)[:, None] * Hx) + H.T @ ((W * r)[:, None] * Hx)
              + H.T @ ((W * q)[:, None] * H))
        idx = slice(i * N, i * N + N + 1)
        K[idx, idx] += Ke
        F[idx] += H.T @ (W * f)

    u = np.zeros(n, dtype=dtype)
    u[0] = problem.u_a
    free = np.arange(1, n)
    if problem.right == "dirichlet":
        u[-1] = problem.u_b
        free = free[:-1]
    else:
        # boundary term -p(b) u'(b) v(b) = -p(b) gamma u(b) v(b)
        pb = _eval(problem.pieces[pmap[-1]].p, np.array([problem.b]), dtype)[0]
        K[-1, -1] -= pb * problem.gamma
    fixed = np.setdiff1d(np.arange(n), free)
    rhs = F[free] - K[np.ix_(free, fixed)] @ u[fixed]
    A = K[np.ix_(free, free)]
    u[free] = linalg.lu_solve(A, rhs)

    xg = np.concatenate([mesh.to_physical(i, grid.nodes[:-1]) for i in range(mesh.M)]
                        + [[problem.b]])
    Psi_lu = linalg.LUFactor(basis.values(grid.nodes).T)

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        ie, ye = mesh.locate(x)
        Hs = Psi_lu.solve(basis.values(ye).T).T
        loc = np.stack([u[i * N:i * N + N + 1] for i in range(mesh.M)])
        return np.einsum("ij,ij->i", Hs, loc[ie])

    err = None
    if problem.exact is not None:
        err = float(np.abs(u - problem.exact(xg)).max())
    return ElementReport("SEM", xg, u, float("nan"), None, err,
                         {"quadrature": quadrature}, evaluate=evaluate, dofs=n)


# ------------------------------------------------- p-version prolate elements

def solve_prolate_element(problem, mesh, basis, grid, bb):
    """Collocation/Galerkin prolate-element solve.

    On element ``i`` the solution is
    ``U_{i-1} beta_0 + sum_k w_k beta_k + U_i beta_N`` in the reference
    variable. Interior PL nodes carry the strong equation, each interior
    breakpoint carries the Galerkin equation of its hat function, and the
    right boundary is a Dirichlet row or a Robin collocation row.

    Returns
    -------
    ElementReport
        ``max_error`` is measured on 1000 uniform samples of (a, b).
    """
    N = basis.N
    Me = mesh.M
    h = mesh.h
    pmap = problem.piece_map(mesh)
    dtype = _dtype(problem)
    yn = np.asarray(grid.nodes)
    yi = yn[1:-1]
    nb = Me + 1
    n = nb + Me * (N - 1)
    A = np.zeros((n, n), dtype=dtype)
    rhs = np.zeros(n, dtype=dtype)

    def wcols(i):
        return np.arange(nb + i * (N - 1), nb + (i + 1) * (N - 1))

    Bin, B1in = bb.Bin, bb.B1in
    # collocation: -p v'' - p' v' + q v + r v' = f with v'' = (4/h^2) w
    for i in range(Me):
        pc = problem.pieces[pmap[i]]
        xs = mesh.to_physical(i, yi)
        p = _eval(pc.p, xs, dtype)
        dp = _eval(pc.dp, xs, dtype)
        q = _eval(pc.q, xs, dtype)
        r = _eval(pc.r, xs, dtype)
        g = (r - dp) * (2.0 / h)
        rows = wcols(i)
        blk = (-(4.0 / h ** 2) * np.diag(p) + g[:, None] * B1in + q[:, None] * Bin)
        A[np.ix_(rows, rows)] = blk
        A[rows, i] = -0.5 * g + q * (1.0 - yi) / 2.0
        A[rows, i + 1] = 0.5 * g + q * (1.0 + yi) / 2.0
        rhs[rows] = _eval(pc.f, xs, dtype)

    # joint rows: Galerkin with the hat function at a_i
    yg, wg = _gauss_points(basis)
    Bg = bb.values(yg)
    B1g = bb.values(yg, 1)
    J = 0.5 * h
    for i in range(Me):
        pc = problem.pieces[pmap[i]]
        xs = mesh.to_physical(i, yg)
        W = wg * J
        p = _eval(pc.p, xs, dtype)
        q = _eval(pc.q, xs, dtype)
        r = _eval(pc.r, xs, dtype)
        f = _eval(pc.f, xs, dtype)
        dv = B1g / J               # d beta_k / dx, columns k = 0..N
        cols = np.concatenate(([i], wcols(i), [i + 1]))
        for side, node in ((0, i), (1, i + 1)):
            if node == 0 or node == Me:
                continue
            hat = (1.0 - yg) / 2.0 if side == 0 else (1.0 + yg) / 2.0
            dhat = (-1.0 if side == 0 else 1.0) / h
            row = (W * p * dhat) @ dv + (W * r * hat) @ dv + (W * q * hat) @ Bg
            A[node, cols] += row
            rhs[node] += (W * f * hat).sum()

    A[0, 0] = 1.0
    rhs[0] = problem.u_a
    if problem.right == "dirichlet":
        A[Me, Me] = 1.0
        rhs[Me] = problem.u_b
    else:
        # (2/h) [ (U_M - U_{M-1})/2 + sum_k w_k beta_k'(1) ] - gamma U_M = 0
        A[Me, Me - 1] = -1.0 / h
        A[Me, Me] = 1.0 / h - problem.gamma
        A[Me, wcols(Me - 1)] = (2.0 / h) * bb.B1[-1, 1:-1]
        rhs[Me] = 0.0
    sol = linalg.lu_solve(A, rhs)
    U = sol[:nb]
    Wl = np.stack([sol[wcols(i)] for i in range(Me)])
    loc = np.concatenate([U[:-1, None], Wl, U[1:, None]], axis=1)

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        ie, ye = mesh.locate(x)
        return np.einsum("ij,ij->i", bb.values(ye), loc[ie])

    xg = np.concatenate([mesh.to_physical(i, yn[:-1]) for i in range(Me)] + [[problem.b]])
    ug = np.concatenate([(bb.B @ loc[i])[:-1] for i in range(Me)] + [[U[-1]]])
    err = _sample_error(problem, evaluate)
    return ElementReport("PEM", xg, ug, float("nan"), None, err, {},
                         evaluate=evaluate, dofs=n)


# --------------------------------------------------------------- test problems

def table3_problem():
    """``-(1+x^2) u'' - (2x + sin x) u' + u = f`` on (0, 1), written in
    divergence form ``-((1+x^2) u')' - sin(x) u' + u``.

    The exact solution ``(x+1)^{13/3} sin(pi x / 2)`` has limited smoothness
    only through its growth, so polynomial elements converge quickly.
    """
    al = 13.0 / 3.0
    hp = 0.5 * np.pi

    def parts(x):
        x = np.asarray(x, dtype=float)
        A0 = (x + 1.0) ** al
        A1 = al * (x + 1.0) ** (al - 1.0)
        A2 = al * (al - 1.0) * (x + 1.0) ** (al - 2.0)
        S0, S1, S2 = np.sin(hp * x), hp * np.cos(hp * x), -hp * hp * np.sin(hp * x)
        return A0 * S0, A1 * S0 + A0 * S1, A2 * S0 + 2.0 * A1 * S1 + A0 * S2

    def exact(x):
        return parts(x)[0]

    def f(x):
        u, du, d2u = parts(x)
        return -(1.0 + x * x) * d2u - (2.0 * x + np.sin(x)) * du + u

    piece = Piece(p=lambda x: 1.0 + x * x, q=lambda x: np.ones_like(x), f=f,
                  dp=lambda x: 2.0 * x, r=lambda x: -np.sin(x))
    return ElementProblem(0.0, 1.0, [0.0, 1.0], [piece], u_a=0.0,
                          u_b=float(exact(1.0)), exact=exact)


@dataclass(frozen=True)
class HelmholtzProblem:
    """``(c^2 u')' + k^2 n^2 u = f`` with ``u(a) = u_a``.

    ``speed`` and ``index`` list ``(c, c', n)``-style callables per piece:
    ``speed[i] = (c, dc)`` and ``index[i] = n``. The right end is either
    Dirichlet (``u_b``) or the radiation condition ``c u' - i k n u = 0``.
    """

    a: float
    b: float
    breaks: Sequence[float]
    speed: Sequence[tuple]
    index: Sequence[Callable]
    k: float
    u_a: complex
    f: Callable = _zero
    radiation: bool = True
    u_b: complex = 0.0
    exact: Optional[Callable] = None

    def as_element_problem(self):
        """Rewrite as ``-(p u')' + q u = F`` with ``p = c^2``, ``q = -k^2 n^2``, ``F = -f``."""
        pieces = []
        for (cf, dcf), nf in zip(self.speed, self.index):
            pieces.append(Piece(
                p=lambda x, cf=cf: cf(x) ** 2,
                dp=lambda x, cf=cf, dcf=dcf: 2.0 * cf(x) * dcf(x),
                q=lambda x, nf=nf: -(self.k ** 2) * nf(x) ** 2,
                f=lambda x: -np.asarray(self.f(x), dtype=complex)))
        gamma = 0.0
        if self.radiation:
            cb, _ = self.speed[-1]
            nb = self.index[-1]
            xb = np.array([self.b])
            gamma = 1j * self.k * nb(xb)[0] / cb(xb)[0]
        return ElementProblem(self.a, self.b, list(self.breaks), pieces, u_a=self.u_a,
                              right="robin" if self.radiation else "dirichlet",
                              u_b=self.u_b, gamma=gamma, exact=self.exact,
                              complex_valued=True)


def _const(v):
    return lambda x: np.full(np.shape(x), float(v))


def helmholtz_piecewise_constant(k):
    """Two media with speeds 2 and 1 and a closed-form solution."""
    def exact(x):
        x = np.asarray(x, dtype=float)
        left = (3.0 * np.exp(1j * k * (1.0 + 2.0 * x) / 4.0)
                + np.exp(1j * k * (3.0 - 2.0 * x) / 4.0)) / 4.0
        return np.where(x < 0.5, left, np.exp(1j * k * x))

    return HelmholtzProblem(
        0.0, 1.0, [0.0, 0.5, 1.0],
        speed=[(_const(2.0), _const(0.0)), (_const(1.0), _const(0.0))],
        index=[_const(1.0), _const(1.0)], k=k,
        u_a=complex(exact(0.0)), exact=exact)


def helmholtz_piecewise_smooth(k, u_a=1.0):
    """Four-element heterogeneous medium with unit forcing; no closed form."""
    return HelmholtzProblem(
        0.0, 1.0, [0.0, 0.25, 0.5, 1.0],
        speed=[(lambda x: 1.0 + x * x, lambda x: 2.0 * x),
               (lambda x: 1.0 - x * x, lambda x: -2.0 * x),
               (_const(1.0), _const(0.0))],
        index=[lambda x: 1.75 + x, lambda x: 1.25 - x, _const(2.0)],
        k=k, u_a=u_a, f=lambda x: np.ones(np.shape(x)))

"""Experiment drivers: eigenvalue resolution studies and table builders.

Every builder returns plain Python rows so the CLI can serialize them and
the tests can assert on them without parsing files.
"""

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext

import numpy as np

from . import linalg
from .birkhoff import build_birkhoff
from .cardinal import diff_operators
from .collocation import model_problem, solve_npcol, solve_pcol, solve_ppcol
from .core import build_basis, lambda_n
from .elements import (Mesh1D, helmholtz_piecewise_constant, helmholtz_piecewise_smooth,
                       hp_project, solve_prolate_element, solve_sem, table3_problem)
from .errors import InvalidArgumentError
from .kr_rule import select_n, transition_bandwidth
from .quadrature import prolate_grid

ACCURATE = 1e-12

# ------------------------------------------------------------ Bessel zeros

_SERIES_LIMIT = 25.0


def _bessel_series(nu, x):
    """``J_nu(x)`` by the ascending series in 60-digit decimal arithmetic."""
    with localcontext() as ctx:
        ctx.prec = 60
        X = Decimal(float(x)) / 2
        X2 = X * X
        term = X ** nu / math.factorial(nu)
        total = term
        m = 0
        while True:
            m += 1
            term = -term * X2 / (m * (m + nu))
            total += term
            if abs(term) < Decimal("1e-40"):
                break
        return float(total)


def _bessel_hankel(nu, x):
    """``J_nu(x)`` from the Hankel expansion, truncated at its smallest term."""
    mu = 4.0 * nu * nu
    terms = [1.0]
    k = 1
    while k < 200:
        t = terms[-1] * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(t) > abs(terms[-1]) or abs(t) < 1e-18:
            break
        terms.append(t)
        k += 1
    P = sum(((-1) ** (j // 2)) * t for j, t in enumerate(terms) if j % 2 == 0)
    Q = sum(((-1) ** (j // 2)) * t for j, t in enumerate(terms) if j % 2 == 1)
    chi = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (P * math.cos(chi) - Q * math.sin(chi))


def bessel_j(nu, x):
    """``J_0`` or ``J_1`` at a positive ``x``."""
    if nu not in (0, 1):
        raise InvalidArgumentError("only orders 0 and 1 are supported")
    if x < _SERIES_LIMIT:
        return _bessel_series(nu, x)
    return _bessel_hankel(nu, x)


def bessel_j1_zeros(count):
    """First ``count`` positive zeros of ``J_1`` by Newton from McMahon guesses."""
    roots = np.empty(count)
    for k in range(1, count + 1):
        x = (k + 0.25) * math.pi
        for _ in range(50):
            j1 = bessel_j(1, x)
            dj1 = bessel_j(0, x) - j1 / x
            step = j1 / dj1
            x -= step
            if abs(step) < 1e-15 * x:
                break
        roots[k - 1] = x
    return roots


# ------------------------------------------------------ eigenvalue studies

@dataclass(frozen=True)
class EigStudyReport:
    operator: str
    c: float
    N: int
    errors: np.ndarray
    count: int
    rational_errors: np.ndarray
    rational_count: int
    legendre_errors: np.ndarray
    legendre_count: int
    extra: dict = field(default_factory=dict)


def exact_eigenvalues(operator, count):
    """Dirichlet eigenvalues on (-1, 1) (Laplacian) or (0, 1) (Bessel), descending."""
    j = np.arange(1, count + 1)
    if operator == "laplacian":
        return -(j * np.pi / 2.0) ** 2
    if operator == "bessel":
        return -bessel_j1_zeros(count) ** 2
    raise InvalidArgumentError(f"unknown operator {operator!r}")


def interior_operator(operator, x, D1, D2):
    """Interior block of the discrete operator on the grid ``x``."""
    D1in = D1[1:-1, 1:-1]
    D2in = D2[1:-1, 1:-1]
    if operator == "laplacian":
        return np.array(D2in)
    if operator == "bessel":
        # r = (x + 1)/2 on (0, 1): u'' + u'/r - u/r^2
        r = 0.5 * (x[1:-1] + 1.0)
        return 4.0 * D2in + (2.0 / r)[:, None] * D1in - np.diag(1.0 / r ** 2)
    raise InvalidArgumentError(f"unknown operator {operator!r}")


def relative_errors(A, exact, pairing="rank"):
    """Relative errors of the real parts of ``eig(A)`` against ``exact``.

    ``pairing="rank"`` sorts both sets descending and pairs by position;
    ``"nearest"`` pairs each exact value with the closest discrete one.
    """
    lam = linalg.dense_eig(A).real
    if pairing == "rank":
        approx = np.sort(lam)[::-1]
    elif pairing == "nearest":
        approx = np.array([lam[np.argmin(np.abs(lam - e))] for e in exact])
    else:
        raise InvalidArgumentError("pairing must be 'rank' or 'nearest'")
    return np.abs(approx - exact) / np.abs(exact)


def run_eig_study(operator, c, eps=1e-14, N=None, pairing="rank"):
    """Count eigenvalues resolved to 12 digits by prolate and Legendre grids.

    ``N`` defaults to the rule-selected value for ``(c, eps)``.
    """
    if N is None:
        N = select_n(c, eps).n_star
    exact = exact_eigenvalues(operator, N - 1)
    out = {}
    for tag, cc in (("prolate", c), ("legendre", 0.0)):
        basis = build_basis(cc, N)
        grid = prolate_grid(basis)
        ops = diff_operators(basis, grid, rational=(tag == "prolate"))
        x = np.asarray(grid.nodes)
        out[tag] = relative_errors(interior_operator(operator, x, ops.D1, ops.D2),
                                   exact, pairing)
        if tag == "prolate":
            out["rational"] = relative_errors(
                interior_operator(operator, x, ops.Dh1, ops.Dh2), exact, pairing)
    count = {k: int((v < ACCURATE).sum()) for k, v in out.items()}
    return EigStudyReport(operator, float(c), N, out["prolate"], count["prolate"],
                          out["rational"], count["rational"],
                          out["legendre"], count["legendre"])


def run_extreme_eigs(N_list, c_of_N=lambda N: N / 2.0):
    """Largest and smallest eigenvalue moduli of the interior second-derivative
    matrices (modal, rational and Legendre) for each ``N``.
    """
    rows = []
    for N in N_list:
        row = {"N": int(N), "c": float(c_of_N(N))}
        for tag, cc in (("prolate", c_of_N(N)), ("legendre", 0.0)):
            basis = build_basis(cc, N)
            grid = prolate_grid(basis)
            ops = diff_operators(basis, grid, rational=(tag == "prolate"))
            lam = np.abs(linalg.dense_eig(ops.interior("D2")))
            row[f"{tag}_max"] = float(lam.max())
            row[f"{tag}_min"] = float(lam.min())
            if tag == "prolate":
                lam = np.abs(linalg.dense_eig(ops.interior("Dh2")))
                row["rational_max"] = float(lam.max())
                row["rational_min"] = float(lam.min())
        rows.append(row)
    return rows


def loglog_slope(xs, ys):
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])


# ------------------------------------------------------------ table builders

TABLE1_C = (10, 20, 40, 80, 100, 200, 400, 800)
TABLE2_N = (4, 8, 16, 32, 64, 128, 256, 512)


def table1_rows(eps=1e-14, with_lambda=True):
    """Rule-selected ``N_*`` with ``nu``, ``lambda`` estimates and ``q`` for each ``c``."""
    rows = []
    for c in TABLE1_C:
        pair = select_n(c, eps)
        row = {"c": c, "eps": eps, "n_star": pair.n_star, "x_root": pair.x_root,
               "nu": pair.nu_at_n_star, "c_transition": transition_bandwidth(pair.n_star)}
        if with_lambda:
            basis = build_basis(c, pair.n_star)
            row["lambda"] = lambda_n(basis, pair.n_star)
            row["q"] = c / math.sqrt(basis.chi[-1])
        rows.append(row)
    return rows


def _collocation_setup(c, N):
    basis = build_basis(c, N)
    grid = prolate_grid(basis)
    return basis, grid, diff_operators(basis, grid, rational=False), build_birkhoff(basis, grid)


def table2_rows(N_list=TABLE2_N, iterative=True, pcol_iter_max_N=128):
    """Condition numbers, errors and BiCGStab steps of the three schemes, ``c = N/2``.

    PCOL is iterated only up to ``pcol_iter_max_N``; beyond that its step
    count is reported as missing because the iteration stalls.
    """
    prob = model_problem()
    rows = []
    for N in N_list:
        basis, grid, ops, bb = _collocation_setup(N / 2.0, N)
        for scheme in ("PCOL", "P-PCOL", "N-PCOL"):
            if scheme == "PCOL":
                fn, args = solve_pcol, (ops,)
            elif scheme == "P-PCOL":
                fn, args = solve_ppcol, (ops, bb)
            else:
                fn, args = solve_npcol, (bb,)
            rep = fn(prob, basis, grid, *args)
            steps = None
            it_err = None
            if iterative and (scheme != "PCOL" or N <= pcol_iter_max_N):
                it = fn(prob, basis, grid, *args, solver="iterative", compute_cond=False)
                steps = it.stats.iterations if it.stats.converged else -it.stats.iterations
                it_err = it.max_error
            rows.append({"N": N, "c": N / 2.0, "scheme": scheme, "cond": rep.cond,
                         "max_error": rep.max_error, "steps": steps,
                         "iterative_error": it_err})
    return rows


def table3_rows(N_list=(2, 3, 4, 6, 8, 16), M_list=(2, 4, 8, 16), quadrature="pl"):
    """Spectral-element errors for ``c = N/4`` and ``c = 0`` over ``h = 1/M``."""
    prob = table3_problem()
    rows = []
    for N in N_list:
        for tag, c in (("prolate", N / 4.0), ("legendre", 0.0)):
            basis = build_basis(c, N)
            grid = prolate_grid(basis)
            for M in M_list:
                rep = solve_sem(prob, Mesh1D(0.0, 1.0, M), basis, grid, quadrature)
                rows.append({"family": tag, "N": N, "c": c, "M": M, "h": 1.0 / M,
                             "max_error": rep.max_error})
    return rows


def projection_rows(c, N, M_list):
    """Broken L2 error of projecting ``u = 1`` for each element count."""
    basis = build_basis(c, N)
    return [{"c": c, "N": N, "M": M,
             "l2_error": hp_project(np.ones_like, Mesh1D(0.0, 1.0, M), basis).l2_error}
            for M in M_list]


def fig4_rows(N_list=(16, 32, 64, 128), c_of_N=lambda N: N / 2.0):
    """Eigenvalue envelope of ``Bin D2in`` and ``Bin Dh2in``."""
    rows = []
    for N in N_list:
        basis = build_basis(c_of_N(N), N)
        grid = prolate_grid(basis)
        ops = diff_operators(basis, grid)
        bb = build_birkhoff(basis, grid)
        row = {"N": N, "c": c_of_N(N)}
        for tag, name in (("modal", "D2"), ("rational", "Dh2")):
            lam = linalg.dense_eig(bb.Bin @ ops.interior(name))
            row[f"{tag}_re_min"] = float(lam.real.min())
            row[f"{tag}_re_max"] = float(lam.real.max())
            row[f"{tag}_dist"] = float(np.abs(lam - 1.0).max())
        rows.append(row)
    return rows


def _element_setup(c, N):
    basis = build_basis(c, N)
    grid = prolate_grid(basis)
    return basis, grid, build_birkhoff(basis, grid)


def helmholtz_k60_rows(k=60.0, bandwidths=(10, 20, 30, 40, 52), eps=1e-14):
    """Prolate-element versus Legendre SEM errors on the two-medium problem."""
    prob = helmholtz_piecewise_constant(k).as_element_problem()
    mesh = Mesh1D(0.0, 1.0, 2)
    xs = np.linspace(0.0, 1.0, 1000)
    rows = []
    for cb in bandwidths:
        N = select_n(cb, eps).n_star
        basis, grid, bb = _element_setup(cb, N)
        pem = solve_prolate_element(prob, mesh, basis, grid, bb)
        b0 = build_basis(0.0, N)
        sem = solve_sem(prob, mesh, b0, prolate_grid(b0))
        sem_err = float(np.abs(sem.evaluate(xs) - prob.exact(xs)).max())
        rows.append({"k": k, "bandwidth": cb, "N": N, "dofs": pem.dofs,
                     "prolate_error": pem.max_error, "legendre_error": sem_err})
    return rows


def helmholtz_k160(k=160.0, coarse=(36, 48), fine=(177, 144), n_samples=1000):
    """Coarse and fine prolate-element solutions of the four-element problem.

    Returns the sample points, both solutions, a Legendre SEM cross-check
    of the fine reference, and the coarse-versus-fine maximum deviation.
    """
    prob = helmholtz_piecewise_smooth(k).as_element_problem()
    mesh = Mesh1D(0.0, 1.0, 4)
    xs = np.linspace(0.0, 1.0, n_samples)
    sols = {}
    for tag, (cb, N) in (("coarse", coarse), ("fine", fine)):
        basis, grid, bb = _element_setup(cb, N)
        sols[tag] = solve_prolate_element(prob, mesh, basis, grid, bb).evaluate(xs)
    b0 = build_basis(0.0, fine[1])
    leg = solve_sem(prob, mesh, b0, prolate_grid(b0)).evaluate(xs)
    return {
        "x": xs, "coarse": sols["coarse"], "fine": sols["fine"], "legendre": leg,
        "coarse_vs_fine": float(np.abs(sols["coarse"] - sols["fine"]).max()),
        "fine_vs_legendre": float(np.abs(sols["fine"] - leg).max()),
    }

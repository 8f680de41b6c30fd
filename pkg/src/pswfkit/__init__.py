"""Prolate spheroidal wave function spectral toolkit."""

from .birkhoff import BirkhoffBasis, birkhoff_interpolate, build_birkhoff
from .cardinal import DiffOperators, diff_operators, modal_diffmats, q_ratio, rational_diffmats
from .collocation import Bvp2, SolveReport, model_problem, solve_npcol, solve_pcol, solve_ppcol
from .core import (ProlateBasis, ProlateParams, build_basis, eval_psi, lambda_n,
                   lambda_upper_bound)
from .elements import (ElementProblem, HelmholtzProblem, Mesh1D, Piece, hp_project,
                       solve_prolate_element, solve_sem)
from .errors import (IllConditionedError, InvalidArgumentError, NoRootError, PswfError,
                     RootCountError, SingularMatrixError, TruncationError)
from .kr_rule import KrPair, nu, select_n, transition_bandwidth
from .quadrature import ProlateGrid, pl_points, pl_weights, prolate_grid

__version__ = "0.1.0"

__all__ = [
    "BirkhoffBasis", "Bvp2", "DiffOperators", "ElementProblem", "HelmholtzProblem",
    "IllConditionedError", "InvalidArgumentError", "KrPair", "Mesh1D", "NoRootError",
    "Piece", "ProlateBasis", "ProlateGrid", "ProlateParams", "PswfError", "RootCountError",
    "SingularMatrixError", "SolveReport", "TruncationError", "birkhoff_interpolate",
    "build_basis", "build_birkhoff", "diff_operators", "eval_psi", "hp_project",
    "lambda_n", "lambda_upper_bound", "modal_diffmats", "model_problem", "nu",
    "pl_points", "pl_weights", "prolate_grid", "q_ratio", "rational_diffmats",
    "select_n", "solve_npcol", "solve_pcol", "solve_ppcol", "solve_prolate_element",
    "solve_sem", "transition_bandwidth",
]

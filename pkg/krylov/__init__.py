"""Unnormalized Krylov solvers for Hx + c = 0 with symmetric, possibly singular H."""
from .cg import solve_cg
from .errors import (
    DidNotTerminate,
    KrylovError,
    NonpositiveCurvature,
    NumericalBreakdown,
    ZeroRightHandSide,
)
from .lanczos import LanczosProcess, extract_tridiagonal, initial_triple, next_triple
from .minres import solve_minres
from .models import (
    IterationTrace,
    KrylovConfig,
    LanczosTriple,
    MinresReport,
    ScalingStrategy,
    SolveReport,
    Status,
    Verdict,
)
from .operator import DenseSymmetric, FunctionOperator, SymmetricOperator, make_dense, make_diagonal
from .solver import check_delta_laws, relative_residual, solve_krylov

__all__ = [
    "DenseSymmetric",
    "DidNotTerminate",
    "FunctionOperator",
    "IterationTrace",
    "KrylovConfig",
    "KrylovError",
    "LanczosProcess",
    "LanczosTriple",
    "MinresReport",
    "NonpositiveCurvature",
    "NumericalBreakdown",
    "ScalingStrategy",
    "SolveReport",
    "Status",
    "SymmetricOperator",
    "Verdict",
    "ZeroRightHandSide",
    "check_delta_laws",
    "extract_tridiagonal",
    "initial_triple",
    "make_dense",
    "make_diagonal",
    "next_triple",
    "relative_residual",
    "solve_cg",
    "solve_krylov",
    "solve_minres",
]

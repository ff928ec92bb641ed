"""Dense reference computations and random problem families."""
from .dense import (
    dense_solve,
    eigendecompose,
    is_compatible,
    krylov_grade,
    krylov_lstsq,
    min_residual_norm,
    minres_qp,
    nullspace_basis,
    pinv_solve,
    spectral_grade,
)
from .models import EigenDecomposition, KrylovBasis

__all__ = [
    "EigenDecomposition",
    "KrylovBasis",
    "dense_solve",
    "eigendecompose",
    "is_compatible",
    "krylov_grade",
    "krylov_lstsq",
    "min_residual_norm",
    "minres_qp",
    "nullspace_basis",
    "pinv_solve",
    "spectral_grade",
]

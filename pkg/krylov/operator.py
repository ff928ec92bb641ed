"""Symmetric linear operators and the vector helpers the solvers share.

Solvers only ever call ``apply``; the dense realization exists for files,
demos and the reference computations in ``oracle``.
"""
from abc import ABC, abstractmethod
from typing import Callable, Optional, Sequence
import logging

import numpy as np
from numpy.typing import ArrayLike

from .errors import (
    AsymmetryExceeded,
    DimensionMismatch,
    EmptyInput,
    NonFiniteValue,
    NonSquare,
)

logger = logging.getLogger("unnormalized_krylov.operator")

# Relative tolerance on |A_ij - A_ji| accepted by make_dense
ASYMMETRY_TOL = 1e-12


def as_vector(v: ArrayLike, n: Optional[int] = None) -> np.ndarray:
    """
    Convert input to a finite float64 vector.

    Args:
        v: Anything numpy can turn into a 1-D array
        n: Required length, or None to accept any length

    Returns:
        A fresh 1-D float64 array
    """
    arr = np.array(v, dtype=np.float64).reshape(-1)
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatch(n, arr.shape[0])
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValue("vector contains NaN or Inf")
    return arr


def dot(u: np.ndarray, v: np.ndarray) -> float:
    """Euclidean inner product u^T v."""
    if u.shape != v.shape:
        raise DimensionMismatch(u.shape[0], v.shape[0])
    return float(np.dot(u, v))


def norm2(v: np.ndarray) -> float:
    """Euclidean norm."""
    return float(np.linalg.norm(v))


def axpy(a: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Return a*x + y as a new vector."""
    if x.shape != y.shape:
        raise DimensionMismatch(y.shape[0], x.shape[0])
    return a * x + y


class SymmetricOperator(ABC):
    """A symmetric map v -> Hv on R^n, known only through its action."""

    def __init__(self, dim: int):
        if dim < 1:
            raise EmptyInput("operator dimension must be positive")
        self.dim = dim

    @abstractmethod
    def _matvec(self, v: np.ndarray) -> np.ndarray:
        """Compute Hv for a validated vector."""

    def apply(self, v: np.ndarray) -> np.ndarray:
        """
        Apply the operator.

        Args:
            v: Vector of length ``dim``

        Returns:
            The product Hv
        """
        if v.shape != (self.dim,):
            raise DimensionMismatch(self.dim, v.shape[0] if v.ndim else 0)
        return self._matvec(v)

    def __matmul__(self, v: np.ndarray) -> np.ndarray:
        return self.apply(v)

    def norm_estimate(self) -> float:
        """Scale of ||H|| used by relative_residual (1.0 when unknown)."""
        return 1.0


class FunctionOperator(SymmetricOperator):
    """Matrix-free operator wrapping a callable.

    The callable must be symmetric and deterministic; neither is checked.
    """

    def __init__(
        self,
        dim: int,
        matvec: Callable[[np.ndarray], np.ndarray],
        scale: float = 1.0,
    ):
        super().__init__(dim)
        self._fn = matvec
        self._scale = scale

    def _matvec(self, v: np.ndarray) -> np.ndarray:
        return np.asarray(self._fn(v), dtype=np.float64)

    def norm_estimate(self) -> float:
        return self._scale


class DenseSymmetric(SymmetricOperator):
    """Dense symmetric matrix stored explicitly."""

    def __init__(self, entries: np.ndarray):
        super().__init__(entries.shape[0])
        self.n = entries.shape[0]
        self._entries = entries
        self._entries.setflags(write=False)

    @property
    def entries(self) -> np.ndarray:
        """Read-only n x n array."""
        return self._entries

    def _matvec(self, v: np.ndarray) -> np.ndarray:
        return self._entries @ v

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self._entries, "fro"))

    def norm_estimate(self) -> float:
        return self.frobenius_norm()

    def __repr__(self) -> str:
        return f"DenseSymmetric(n={self.n})"


def make_dense(entries: ArrayLike, tol: float = ASYMMETRY_TOL) -> DenseSymmetric:
    """
    Build a dense symmetric operator from a square array.

    Entries are symmetrized as (A + A^T)/2 after checking that the
    asymmetry stays within ``tol * max|A|``.

    Args:
        entries: Square real array
        tol: Relative asymmetry tolerance

    Returns:
        DenseSymmetric operator
    """
    a = np.array(entries, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(a.shape)
    if a.shape[0] == 0:
        raise EmptyInput("matrix is empty")
    if not np.all(np.isfinite(a)):
        raise NonFiniteValue("matrix contains NaN or Inf")

    gap = np.abs(a - a.T)
    limit = tol * float(np.max(np.abs(a), initial=0.0))
    if gap.size and float(gap.max()) > limit:
        i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
        logger.error(f"Asymmetric matrix at ({i}, {j}): gap {gap[i, j]:.3e}")
        raise AsymmetryExceeded(int(i), int(j), float(gap[i, j]), limit)

    return DenseSymmetric(0.5 * (a + a.T))


def make_diagonal(d: Sequence[float] | np.ndarray) -> DenseSymmetric:
    """
    Build the diagonal operator diag(d).

    Args:
        d: Nonempty sequence of finite diagonal entries

    Returns:
        DenseSymmetric with apply(v)[i] = d[i] * v[i]
    """
    diag = np.array(d, dtype=np.float64).reshape(-1)
    if diag.size == 0:
        raise EmptyInput("diagonal is empty")
    diag = as_vector(diag)
    return DenseSymmetric(np.diag(diag))

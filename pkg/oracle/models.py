"""Data models for the dense reference computations."""
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class EigenDecomposition:
    """H = V diag(eigenvalues) V^T with eigenvalues ascending."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    @property
    def scale(self) -> float:
        """max |lambda|, the reference for relative thresholds."""
        return float(np.max(np.abs(self.eigenvalues), initial=0.0))

    def null_mask(self, tol: float) -> np.ndarray:
        return np.abs(self.eigenvalues) <= tol * self.scale


@dataclass
class KrylovBasis:
    """Explicit power basis [c, Hc, ..., H^{m-1} c] and the grade r."""
    columns: list[np.ndarray] = field(default_factory=list)
    rank: int = 0

    def matrix(self) -> np.ndarray:
        return np.column_stack(self.columns)

"""Problem data as loaded from files or built in code."""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from krylov.errors import DimensionMismatch, ZeroRightHandSide
from krylov.operator import DenseSymmetric, as_vector

from .matrix_market import read_matrix_market, read_vector


@dataclass
class ProblemInstance:
    """A system Hx + c = 0 with dim(H) = len(c) and c nonzero."""
    H: DenseSymmetric
    c: np.ndarray
    name: str = "problem"
    source_paths: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.c = as_vector(self.c)
        if self.c.size != self.H.n:
            raise DimensionMismatch(self.H.n, self.c.size, "right-hand side")
        if not np.any(self.c):
            raise ZeroRightHandSide()

    @property
    def dimension(self) -> int:
        return self.H.n

    @classmethod
    def from_files(
        cls,
        matrix_path: Union[str, Path],
        c_path: Union[str, Path],
        rhs_is_b: bool = False,
        name: Optional[str] = None,
    ) -> "ProblemInstance":
        """
        Load H and c from disk.

        Args:
            matrix_path: Matrix Market file for H
            c_path: Vector file
            rhs_is_b: The file holds b of Ax = b; c is set to -b

        Returns:
            ProblemInstance
        """
        H = read_matrix_market(matrix_path)
        c = read_vector(c_path)
        if rhs_is_b:
            # 0.0 - b keeps zero entries positive
            c = 0.0 - c
        return cls(
            H=H,
            c=c,
            name=name or Path(matrix_path).stem,
            source_paths=[str(matrix_path), str(c_path)],
        )


def load_problem(
    matrix_path: Union[str, Path],
    c_path: Union[str, Path],
    rhs_is_b: bool = False,
) -> ProblemInstance:
    """Shorthand for ProblemInstance.from_files."""
    return ProblemInstance.from_files(matrix_path, c_path, rhs_is_b)

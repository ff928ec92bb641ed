"""Exceptions raised by the unnormalized Krylov solvers."""
from typing import Any, Optional

import numpy as np


class KrylovError(Exception):
    """Base class for every failure raised by this package."""


# =============================================================================
# Input validation
# =============================================================================


class DimensionMismatch(KrylovError, ValueError):
    """Vector or operator dimensions do not agree."""

    def __init__(self, expected: int, got: int, what: str = "vector"):
        self.expected = expected
        self.got = got
        super().__init__(f"{what} has length {got}, expected {expected}")


class NonSquare(KrylovError, ValueError):
    """A matrix that must be square is not."""

    def __init__(self, shape: tuple[int, ...]):
        self.shape = shape
        super().__init__(f"matrix must be square, got shape {shape}")


class AsymmetryExceeded(KrylovError, ValueError):
    """Matrix entries differ from their transpose beyond tolerance."""

    def __init__(self, i: int, j: int, gap: float, tolerance: float):
        self.i = i
        self.j = j
        self.gap = gap
        self.tolerance = tolerance
        super().__init__(
            f"entries ({i}, {j}) and ({j}, {i}) differ by {gap:.3e} "
            f"(tolerance {tolerance:.3e})"
        )


class EmptyInput(KrylovError, ValueError):
    """An input that must be nonempty is empty."""


class NonFiniteValue(KrylovError, ValueError):
    """A vector or matrix contains NaN or Inf."""


class ZeroRightHandSide(KrylovError, ValueError):
    """The right-hand side c is zero."""

    def __init__(self):
        super().__init__("right-hand side c must be nonzero")


# =============================================================================
# Numerical breakdowns
# =============================================================================


class NumericalBreakdown(KrylovError, ArithmeticError):
    """A recursion cannot continue in floating point."""


class ZeroQ(NumericalBreakdown):
    """Next triple requested from a vanishing Lanczos vector."""

    def __init__(self, k: int, q_norm: float):
        self.k = k
        self.q_norm = q_norm
        super().__init__(f"q_{k} has norm {q_norm:.3e}; the iteration should have stopped")


class NormalizationBreakdown(NumericalBreakdown):
    """The normalization scale would divide by zero (pivot breakdown)."""

    def __init__(self, k: int, denominator: float):
        self.k = k
        self.denominator = denominator
        super().__init__(
            f"normalization undefined at step {k}: denominator {denominator:.3e}"
        )


class ZeroYScaling(NumericalBreakdown):
    """The unscaled y_{k+1} vanished, so ||y_{k+1}|| = ||c|| cannot be imposed."""

    def __init__(self, k: int):
        self.k = k
        super().__init__(f"unscaled y_{k + 1} is zero")


class NonpositiveDenominator(NumericalBreakdown):
    """q_k^T q_k passed to the minimum-residual update is not positive."""

    def __init__(self, value: float):
        self.value = value
        super().__init__(f"q_k^T q_k must be positive, got {value:.3e}")


class ZeroCertificate(NumericalBreakdown):
    """The incompatibility certificate y_r vanished."""

    def __init__(self, y_norm: float):
        self.y_norm = y_norm
        super().__init__(f"certificate y_r has norm {y_norm:.3e}")


class EmptyTrace(KrylovError, ValueError):
    """A trace with no completed step was given."""

    def __init__(self):
        super().__init__("trace holds no completed step")


class DidNotTerminate(KrylovError):
    """The iteration limit was reached while ||q_k|| > q_tol."""

    def __init__(self, max_iter: int, q_norm: float, report: Any = None):
        self.max_iter = max_iter
        self.q_norm = q_norm
        self.report = report
        super().__init__(
            f"no termination after {max_iter} steps (||q|| = {q_norm:.3e})"
        )


class NonpositiveCurvature(NumericalBreakdown):
    """Conjugate gradients met p^T H p <= 0."""

    def __init__(self, k: int, curvature: float, direction: Optional[np.ndarray] = None):
        self.k = k
        self.curvature = curvature
        self.direction = direction
        super().__init__(
            f"nonpositive curvature p^T H p = {curvature:.3e} at step {k}; "
            "H is not positive definite along p"
        )


# =============================================================================
# Reference computations
# =============================================================================


class SingularMatrix(KrylovError, ArithmeticError):
    """Dense direct solve requested for a numerically singular matrix."""

    def __init__(self, condition: float):
        self.condition = condition
        super().__init__(f"matrix is numerically singular (condition {condition:.3e})")


class ZeroQInBasis(KrylovError, ValueError):
    """The closed-form QP needs q_i != 0 for every i <= k."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"q_{index} is zero; the closed form needs k < r")

"""Data models for the unnormalized Krylov solvers."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

# sqrt of machine epsilon, the default for both q_tol and delta_tol
SQRT_EPS = float(np.sqrt(np.finfo(np.float64).eps))


class ScalingStrategy(str, Enum):
    """Choice of the free scale theta_k of each new triple."""
    YNORM = "ynorm"            # theta_k > 0 with ||y_{k+1}|| = ||c||
    QNORM = "qnorm"            # theta_k > 0 with ||q_{k+1}|| = ||q_0||
    UNIT = "unit"              # theta_k = 1
    NORMALIZED = "normalized"  # theta_k such that delta_{k+1} = 1

    @classmethod
    def from_name(cls, name: str) -> "ScalingStrategy":
        """Parse a strategy name, case-insensitively."""
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown scaling '{name}' (expected one of: {valid})") from None


class Verdict(str, Enum):
    COMPATIBLE = "compatible"
    INCOMPATIBLE = "incompatible"
    UNDETERMINED = "undetermined"


class Status(str, Enum):
    CONVERGED = "converged"
    MAX_ITER_REACHED = "max_iter_reached"


@dataclass(frozen=True)
class LanczosTriple:
    """One triple (q_k, y_k, delta_k) with q_k = H y_k + delta_k c."""
    q: np.ndarray
    y: np.ndarray
    delta: float
    k: int

    def scaled(self, theta: float) -> "LanczosTriple":
        """Return the same triple multiplied by theta."""
        return LanczosTriple(theta * self.q, theta * self.y, theta * self.delta, self.k)


@dataclass
class IterationTrace:
    """
    Per-step coefficients of a run.

    After m completed steps: ``alphas``, ``thetas`` hold m entries
    (k = 0..m-1), ``betas`` holds max(m-1, 0) entries (beta_0..beta_{m-2}),
    and ``qnorms``, ``deltas`` hold m+1 entries (k = 0..m).
    """
    alphas: list[float] = field(default_factory=list)
    betas: list[float] = field(default_factory=list)
    thetas: list[float] = field(default_factory=list)
    qnorms: list[float] = field(default_factory=list)
    deltas: list[float] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.alphas)

    def record_start(self, q_norm: float, delta: float) -> None:
        self.qnorms.append(q_norm)
        self.deltas.append(delta)

    def record_step(
        self,
        alpha: float,
        beta: Optional[float],
        theta: float,
        q_norm: float,
        delta: float,
    ) -> None:
        self.alphas.append(alpha)
        if beta is not None:
            self.betas.append(beta)
        self.thetas.append(theta)
        self.qnorms.append(q_norm)
        self.deltas.append(delta)


@dataclass(frozen=True)
class Tridiagonal:
    """The matrices T_k and T-bar_k of H Q_k = Q_{k+1} T-bar_k."""
    diag: list[float]
    super: list[float]
    sub: list[float]
    extended_row: float

    @property
    def size(self) -> int:
        return len(self.diag)

    def matrix(self) -> np.ndarray:
        """Square T_k."""
        t = np.diag(np.asarray(self.diag, dtype=np.float64))
        if self.size > 1:
            t += np.diag(np.asarray(self.super, dtype=np.float64), 1)
            t += np.diag(np.asarray(self.sub, dtype=np.float64), -1)
        return t

    def extended_matrix(self) -> np.ndarray:
        """T-bar_k: T_k with the row (0, ..., 0, -1/theta_k) appended."""
        m = self.size
        t = np.zeros((m + 1, m))
        t[:m, :] = self.matrix()
        t[m, m - 1] = self.extended_row
        return t


@dataclass(frozen=True)
class KrylovConfig:
    """Tolerances and choices shared by every solver."""
    q_tol: float = SQRT_EPS
    delta_tol: float = SQRT_EPS
    max_iter: Optional[int] = None  # None means n + 2
    strategy: ScalingStrategy = ScalingStrategy.YNORM
    reorthogonalize: bool = False
    keep_history: bool = False

    def __post_init__(self):
        if not self.q_tol > 0 or not self.delta_tol > 0:
            raise ValueError("tolerances must be positive")
        if self.max_iter is not None and self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not isinstance(self.strategy, ScalingStrategy):
            object.__setattr__(self, "strategy", ScalingStrategy.from_name(str(self.strategy)))

    def iteration_limit(self, n: int) -> int:
        return self.max_iter if self.max_iter is not None else n + 2


@dataclass(kw_only=True)
class SolveReport:
    """Outcome of a Krylov solve: a solution or a certificate of incompatibility."""
    method: str
    verdict: Verdict
    status: Status
    r: int
    delta_r: float
    residual_norm: float
    trace: IterationTrace
    x: Optional[np.ndarray] = None
    certificate_y: Optional[np.ndarray] = None
    triples_kept: list[LanczosTriple] = field(default_factory=list)
    history: Optional[list[LanczosTriple]] = None

    @property
    def certificate_normalized(self) -> Optional[np.ndarray]:
        """Certificate scaled to unit norm."""
        if self.certificate_y is None:
            return None
        return self.certificate_y / np.linalg.norm(self.certificate_y)

    @property
    def compatible(self) -> bool:
        return self.verdict == Verdict.COMPATIBLE


@dataclass(kw_only=True)
class MinresReport(SolveReport):
    """SolveReport extended with the minimum-residual iterate."""
    x_mr: Optional[np.ndarray] = None
    g_mr: Optional[np.ndarray] = None
    residual_history: list[float] = field(default_factory=list)
    x_difference: Optional[float] = None  # ||x_r - x_r^MR|| when compatible
    iterates: Optional[list[np.ndarray]] = None


@dataclass
class MinresAccumulator:
    """Running state (y_k^MR, delta_k^MR, x_k^MR, g_k^MR) of the MINRES recursions."""
    y_mr: np.ndarray
    delta_mr: float
    x_mr: np.ndarray
    g_mr: np.ndarray
    residual_history: list[float] = field(default_factory=list)
    k: int = 0


@dataclass(frozen=True)
class CgState:
    """Conjugate-gradient state: iterate, gradient g = Hx + c and direction."""
    x: np.ndarray
    g: np.ndarray
    p: np.ndarray
    g_dot_g: float
    k: int = 0


@dataclass
class DiagnosticsSummary:
    """Findings of the delta sign laws on a completed trace."""
    consecutive_zero_steps: list[int] = field(default_factory=list)
    sign_checks: list[tuple[int, bool]] = field(default_factory=list)
    ratio_errors: list[tuple[int, float, float, float]] = field(default_factory=list)
    all_positive_before_r: bool = True
    definiteness_hint: Optional[str] = None

    @property
    def passed(self) -> bool:
        """No consecutive zeros and every sign alternation holds."""
        return not self.consecutive_zero_steps and all(ok for _, ok in self.sign_checks)

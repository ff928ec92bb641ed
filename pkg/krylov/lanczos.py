"""Unnormalized Lanczos triples (q_k, y_k, delta_k) and their three-term recurrences.

Each step forms

    q_{k+1} = theta_k (-H q_k + alpha_k q_k + beta_{k-1} q_{k-1})
    y_{k+1} = theta_k (-q_k + alpha_k y_k + beta_{k-1} y_{k-1})
    delta_{k+1} = theta_k (alpha_k delta_k + beta_{k-1} delta_{k-1})

with alpha_k = q_k^T H q_k / q_k^T q_k and
beta_{k-1} = q_{k-1}^T H q_k / q_{k-1}^T q_{k-1}, so that
q_{k+1} = H y_{k+1} + delta_{k+1} c holds at every step. The scale
theta_k is free; ``ScalingStrategy`` picks it.
"""
from typing import Optional, Sequence
import logging

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyTrace,
    NormalizationBreakdown,
    ZeroQ,
    ZeroRightHandSide,
    ZeroYScaling,
)
from .models import (
    SQRT_EPS,
    IterationTrace,
    KrylovConfig,
    LanczosTriple,
    ScalingStrategy,
    Tridiagonal,
)
from .operator import SymmetricOperator, as_vector, dot, norm2

logger = logging.getLogger("unnormalized_krylov.lanczos")

EPS = float(np.finfo(np.float64).eps)


def initial_triple(c: np.ndarray) -> LanczosTriple:
    """
    Start the recursion with (q_0, y_0, delta_0) = (c, 0, 1).

    Args:
        c: Nonzero right-hand side of Hx + c = 0

    Returns:
        The triple for k = 0
    """
    c = as_vector(c)
    if not np.any(c):
        raise ZeroRightHandSide()
    return LanczosTriple(q=c.copy(), y=np.zeros_like(c), delta=1.0, k=0)


def choose_theta(
    strategy: ScalingStrategy,
    k: int,
    q_hat: np.ndarray,
    y_hat: np.ndarray,
    delta_hat: float,
    c_norm: float,
    q_tol: float = SQRT_EPS,
    pivot_scale: float = 0.0,
) -> float:
    """
    Pick theta_k for the unscaled triple (q_hat, y_hat, delta_hat).

    Args:
        strategy: Scaling rule
        k: Index of the step producing triple k+1
        q_hat, y_hat, delta_hat: Unscaled new triple
        c_norm: ||c||, which is also ||q_0||
        q_tol: Below this ||q_hat|| the QNORM rule falls back to YNORM
        pivot_scale: Magnitude of the terms summed into delta_hat, used to
            decide when the normalization pivot has vanished

    Returns:
        Nonzero finite theta_k
    """
    if strategy == ScalingStrategy.UNIT:
        return 1.0

    if strategy == ScalingStrategy.NORMALIZED:
        if delta_hat == 0.0 or abs(delta_hat) <= SQRT_EPS * pivot_scale:
            logger.error(f"Pivot breakdown at step {k}: denominator {delta_hat:.3e}")
            raise NormalizationBreakdown(k, delta_hat)
        return 1.0 / delta_hat

    if strategy == ScalingStrategy.QNORM:
        q_norm = norm2(q_hat)
        if q_norm > q_tol:
            return c_norm / q_norm
        # terminal step: q_hat is rounding noise, scale by y instead

    y_norm = norm2(y_hat)
    if y_norm <= EPS * c_norm:
        logger.error(f"Unscaled y_{k + 1} vanished (norm {y_norm:.3e})")
        raise ZeroYScaling(k)
    return c_norm / y_norm


def next_triple(
    H: SymmetricOperator,
    c: np.ndarray,
    prev: LanczosTriple,
    prev2: Optional[LanczosTriple],
    strategy: ScalingStrategy = ScalingStrategy.YNORM,
    q_tol: float = SQRT_EPS,
    basis: Optional[Sequence[LanczosTriple]] = None,
) -> tuple[LanczosTriple, float, Optional[float], float]:
    """
    Advance the recursion by one step.

    Args:
        H: Symmetric operator
        c: Right-hand side
        prev: Triple k
        prev2: Triple k-1, required exactly when k >= 1
        strategy: Rule for theta_k
        q_tol: A q_k with norm at or below this is treated as zero
        basis: All earlier triples; when given, the new q is projected
            against every stored q_j (full reorthogonalization), with the
            same combination removed from y and delta

    Returns:
        (triple k+1, alpha_k, beta_{k-1} or None at k = 0, theta_k)
    """
    k = prev.k
    if (prev2 is None) != (k == 0):
        raise ValueError(f"prev2 must be given exactly when k >= 1 (k = {k})")

    q = prev.q
    qq = dot(q, q)
    q_norm = float(np.sqrt(qq))
    if q_norm <= q_tol:
        logger.error(f"Requested a step from q_{k} with norm {q_norm:.3e}")
        raise ZeroQ(k, q_norm)

    hq = H.apply(q)
    alpha = dot(q, hq) / qq

    if prev2 is None:
        beta = None
        q_hat = -hq + alpha * q
        y_hat = -q + alpha * prev.y
        delta_hat = alpha * prev.delta
        pivot_scale = abs(alpha * prev.delta)
    else:
        beta = dot(prev2.q, hq) / dot(prev2.q, prev2.q)
        q_hat = -hq + alpha * q + beta * prev2.q
        y_hat = -q + alpha * prev.y + beta * prev2.y
        delta_hat = alpha * prev.delta + beta * prev2.delta
        pivot_scale = abs(alpha * prev.delta) + abs(beta * prev2.delta)

    if basis:
        for t in basis:
            tt = dot(t.q, t.q)
            if tt == 0.0:
                continue
            s = dot(t.q, q_hat) / tt
            q_hat -= s * t.q
            y_hat -= s * t.y
            delta_hat -= s * t.delta

    theta = choose_theta(
        strategy, k, q_hat, y_hat, delta_hat,
        c_norm=norm2(c), q_tol=q_tol, pivot_scale=pivot_scale,
    )

    triple = LanczosTriple(q_hat, y_hat, delta_hat, k + 1).scaled(theta)
    logger.debug(
        f"k={k} alpha={alpha:.6g} beta={beta if beta is None else f'{beta:.6g}'} "
        f"theta={theta:.6g} |q|={norm2(triple.q):.3e} delta={triple.delta:.6g}"
    )
    return triple, alpha, beta, theta


def verify_triple_identity(H: SymmetricOperator, c: np.ndarray, t: LanczosTriple) -> float:
    """
    Relative residual of q = H y + delta c.

    Returns:
        ||q - (H y + delta c)|| / (1 + ||q||)
    """
    if t.q.shape != c.shape or t.y.shape != c.shape:
        raise DimensionMismatch(c.shape[0], t.q.shape[0], "triple")
    defect = t.q - (H.apply(t.y) + t.delta * c)
    return norm2(defect) / (1.0 + norm2(t.q))


def check_qq_identity(
    t_next: LanczosTriple,
    t: LanczosTriple,
    H: SymmetricOperator,
    theta: float,
) -> float:
    """
    Relative defect of q_{k+1}^T q_{k+1} = -theta_k q_{k+1}^T H q_k.

    Returns:
        |q_{k+1}.q_{k+1} + theta_k q_{k+1}.H q_k| / (1 + q_{k+1}.q_{k+1})
    """
    if t_next.q.shape != t.q.shape:
        raise DimensionMismatch(t.q.shape[0], t_next.q.shape[0], "triple")
    qq = dot(t_next.q, t_next.q)
    return abs(qq + theta * dot(t_next.q, H.apply(t.q))) / (1.0 + qq)


def extract_tridiagonal(trace: IterationTrace) -> Tridiagonal:
    """
    Assemble T_k from a trace of k+1 completed steps.

    Column j of T-bar_k holds beta_{j-1} above the diagonal, alpha_j on it
    and -1/theta_j below it.

    Args:
        trace: Trace with at least one completed step

    Returns:
        Tridiagonal view
    """
    m = trace.steps
    if m == 0:
        raise EmptyTrace()
    return Tridiagonal(
        diag=list(trace.alphas),
        super=list(trace.betas[: m - 1]),
        sub=[-1.0 / th for th in trace.thetas[: m - 1]],
        extended_row=-1.0 / trace.thetas[m - 1],
    )


class LanczosProcess:
    """
    Single-owner generator of the triples of one solve.

    Usage:
        process = LanczosProcess(H, c, KrylovConfig())
        while process.q_norm > cfg.q_tol:
            process.advance()
    """

    def __init__(self, H: SymmetricOperator, c: np.ndarray, config: KrylovConfig):
        self.H = H
        self.c = as_vector(c, H.dim)
        self.config = config
        self.current = initial_triple(self.c)
        self.previous: Optional[LanczosTriple] = None
        self.trace = IterationTrace()
        self.trace.record_start(norm2(self.current.q), self.current.delta)
        self._keep = config.keep_history or config.reorthogonalize
        self.history: list[LanczosTriple] = [self.current] if self._keep else []

    @property
    def steps(self) -> int:
        return self.current.k

    @property
    def q_norm(self) -> float:
        return self.trace.qnorms[-1]

    def advance(self) -> tuple[LanczosTriple, float, Optional[float], float]:
        """Compute the next triple and record it."""
        basis = self.history if self.config.reorthogonalize else None
        triple, alpha, beta, theta = next_triple(
            self.H, self.c, self.current, self.previous,
            strategy=self.config.strategy,
            q_tol=self.config.q_tol,
            basis=basis,
        )
        self.trace.record_step(alpha, beta, theta, norm2(triple.q), triple.delta)
        self.previous, self.current = self.current, triple
        if self._keep:
            self.history.append(triple)
        return triple, alpha, beta, theta

    def kept(self) -> list[LanczosTriple]:
        """The last two triples."""
        return [t for t in (self.previous, self.current) if t is not None]

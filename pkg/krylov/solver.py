"""Unnormalized Krylov solver: a solution of Hx + c = 0 or a certificate that none exists."""
from typing import Callable, Optional
import logging

import numpy as np

from .errors import DidNotTerminate, ZeroRightHandSide
from .lanczos import LanczosProcess
from .models import (
    DiagnosticsSummary,
    IterationTrace,
    KrylovConfig,
    LanczosTriple,
    SolveReport,
    Status,
    Verdict,
)
from .operator import SymmetricOperator, as_vector, dot, norm2

logger = logging.getLogger("unnormalized_krylov.solver")

StepCallback = Callable[[LanczosProcess, LanczosTriple], None]


def run_lanczos(
    H: SymmetricOperator,
    c: np.ndarray,
    config: KrylovConfig,
    on_step: Optional[StepCallback] = None,
) -> LanczosProcess:
    """
    Drive the triple recursion until ||q_k|| <= q_tol or the step limit.

    Args:
        H: Symmetric operator
        c: Right-hand side
        config: Solver configuration
        on_step: Called with (process, new triple) after every step

    Returns:
        The process in its final state
    """
    c = as_vector(c, H.dim)
    if not np.any(c):
        raise ZeroRightHandSide()

    process = LanczosProcess(H, c, config)
    limit = config.iteration_limit(H.dim)
    while process.q_norm > config.q_tol and process.steps < limit:
        triple, _, _, _ = process.advance()
        if on_step is not None:
            on_step(process, triple)
    return process


def relative_residual(
    H: SymmetricOperator,
    c: np.ndarray,
    x: Optional[np.ndarray] = None,
    y: Optional[np.ndarray] = None,
) -> float:
    """
    Scale-free accuracy of a verdict.

    ||Hx + c|| / (||H|| ||x|| + ||c||) for a solution x, or
    ||Hy|| / (||H|| ||y||) for a certificate y, with ||H|| taken from
    ``H.norm_estimate()``.
    """
    scale = H.norm_estimate()
    if x is not None:
        return norm2(H.apply(x) + c) / (scale * norm2(x) + norm2(c))
    if y is None:
        raise ValueError("either x or y is required")
    return norm2(H.apply(y)) / (scale * norm2(y))


def _check_accuracy(relative: float, config: KrylovConfig, what: str) -> None:
    if relative > config.q_tol:
        logger.warning(f"Inexact {what}: relative residual {relative:.3e} above q_tol {config.q_tol:.3e}")


def classify(
    process: LanczosProcess,
    config: KrylovConfig,
    method: str = "krylov",
) -> SolveReport:
    """
    Turn a finished recursion into a report.

    With |delta_r| > delta_tol the system is compatible and
    x_r = y_r / delta_r; otherwise y_r is a null vector of H that is not
    orthogonal to c.
    """
    H, c = process.H, process.c
    final = process.current
    history = process.history if config.keep_history else None

    if process.q_norm > config.q_tol:
        report = SolveReport(
            method=method,
            verdict=Verdict.UNDETERMINED,
            status=Status.MAX_ITER_REACHED,
            r=process.steps,
            delta_r=final.delta,
            residual_norm=norm2(final.q),
            trace=process.trace,
            triples_kept=process.kept(),
            history=history,
        )
        logger.error(f"No termination after {process.steps} steps (|q| = {process.q_norm:.3e})")
        raise DidNotTerminate(process.steps, process.q_norm, report)

    if abs(final.delta) > config.delta_tol:
        x = final.y / final.delta
        residual = norm2(H.apply(x) + c)
        logger.info(f"Compatible at r={final.k}: delta_r={final.delta:.6g}, |Hx+c|={residual:.3e}")
        _check_accuracy(relative_residual(H, c, x=x), config, "solution")
        return SolveReport(
            method=method,
            verdict=Verdict.COMPATIBLE,
            status=Status.CONVERGED,
            r=final.k,
            delta_r=final.delta,
            residual_norm=residual,
            trace=process.trace,
            x=x,
            triples_kept=process.kept(),
            history=history,
        )

    residual = norm2(H.apply(final.y))
    logger.info(f"Incompatible at r={final.k}: delta_r={final.delta:.3e}, |H y_r|={residual:.3e}")
    _check_accuracy(relative_residual(H, c, y=final.y), config, "certificate")
    return SolveReport(
        method=method,
        verdict=Verdict.INCOMPATIBLE,
        status=Status.CONVERGED,
        r=final.k,
        delta_r=final.delta,
        residual_norm=residual,
        trace=process.trace,
        certificate_y=final.y.copy(),
        triples_kept=process.kept(),
        history=history,
    )


def solve_krylov(
    H: SymmetricOperator,
    c: np.ndarray,
    config: Optional[KrylovConfig] = None,
) -> SolveReport:
    """
    Solve Hx + c = 0 or certify that no solution exists.

    Args:
        H: Symmetric operator (possibly singular or indefinite)
        c: Nonzero right-hand side
        config: Tolerances, scaling and limits (defaults when None)

    Returns:
        SolveReport with x (compatible) or certificate_y (incompatible)

    Raises:
        ZeroRightHandSide: c is zero
        DidNotTerminate: the step limit was hit; ``.report`` has the partial run
    """
    config = config or KrylovConfig()
    process = run_lanczos(H, c, config)
    return classify(process, config)


def check_delta_laws(trace: IterationTrace, config: Optional[KrylovConfig] = None) -> DiagnosticsSummary:
    """
    Check the sign laws of the delta sequence on a completed run.

    Reports consecutive near-zero deltas before termination (never expected),
    the sign alternation delta_{k+1} delta_{k-1} < 0 around every interior
    near-zero delta_k with same-sign thetas, the predicted value
    delta_{k+1} = -(theta_k/theta_{k-1}) (q_k.q_k / q_{k-1}.q_{k-1}) delta_{k-1}
    against the observed one, and what the signs imply about H when every
    theta is positive.

    Args:
        trace: Trace of a completed run
        config: Supplies delta_tol

    Returns:
        DiagnosticsSummary
    """
    config = config or KrylovConfig()
    tol = config.delta_tol
    deltas = trace.deltas
    thetas = trace.thetas
    qnorms = trace.qnorms
    r = len(deltas) - 1
    summary = DiagnosticsSummary()

    for k in range(r):
        if abs(deltas[k]) <= tol and abs(deltas[k + 1]) <= tol:
            summary.consecutive_zero_steps.append(k)

    for k in range(1, r):
        if abs(deltas[k]) > tol:
            continue
        predicted = -(thetas[k] / thetas[k - 1]) * (qnorms[k] ** 2 / qnorms[k - 1] ** 2) * deltas[k - 1]
        observed = deltas[k + 1]
        rel = abs(predicted - observed) / max(abs(observed), abs(predicted), np.finfo(float).tiny)
        summary.ratio_errors.append((k, predicted, observed, rel))
        if thetas[k] * thetas[k - 1] > 0:
            summary.sign_checks.append((k, deltas[k + 1] * deltas[k - 1] < 0))

    summary.all_positive_before_r = all(d > 0 for d in deltas[:r])
    if thetas and all(th > 0 for th in thetas):
        if any(d < -tol for d in deltas):
            summary.definiteness_hint = "not positive semidefinite"
        elif any(d <= tol for d in deltas):
            summary.definiteness_hint = "not positive definite"

    if not summary.passed:
        logger.warning(
            f"Delta laws violated: zeros at {summary.consecutive_zero_steps}, "
            f"sign checks {summary.sign_checks}"
        )
    return summary


def curvature_identity_residual(
    H: SymmetricOperator,
    t: LanczosTriple,
    t_next: LanczosTriple,
    theta: float,
) -> float:
    """
    Defect of (y_{k+1} - rho y_k)^T H (y_{k+1} - rho y_k) = theta_k rho q_k^T q_k.

    Here rho = delta_{k+1} / delta_k; requires delta_k != 0 and k < r.

    Returns:
        Absolute difference of both sides
    """
    if t.delta == 0.0:
        raise ValueError(f"delta_{t.k} is zero; the identity needs delta_k != 0")
    rho = t_next.delta / t.delta
    d = t_next.y - rho * t.y
    lhs = dot(d, H.apply(d))
    rhs = theta * rho * dot(t.q, t.q)
    return abs(lhs - rhs)

"""Minimum-residual iterates built on the unnormalized triples.

x_k^MR minimizes ||Hx + c|| over K_k(c, H). It is carried as the ratio
x_k^MR = y_k^MR / delta_k^MR of two accumulated quantities:

    delta_{k+1}^MR = (q_{k+1}.q_{k+1} / q_k.q_k) delta_k^MR + delta_{k+1}^2
    y_{k+1}^MR     = (q_{k+1}.q_{k+1} / q_k.q_k) y_k^MR     + delta_{k+1} y_{k+1}

For an incompatible system the last iterate is moved along the
certificate y_r to the minimizer of minimum Euclidean norm.
"""
from dataclasses import fields, replace
from typing import Optional
import logging

import numpy as np

from .errors import NonpositiveDenominator, ZeroCertificate
from .lanczos import LanczosProcess, initial_triple
from .models import (
    SQRT_EPS,
    KrylovConfig,
    LanczosTriple,
    MinresAccumulator,
    MinresReport,
    Verdict,
)
from .operator import SymmetricOperator, as_vector, dot, norm2
from .solver import classify, run_lanczos

logger = logging.getLogger("unnormalized_krylov.minres")

# Joint rescaling of (y^MR, delta^MR) once delta^MR grows past this
OVERFLOW_GUARD = 1e150
RESCALE = 2.0 ** -512


def minres_init(c: np.ndarray, t0: LanczosTriple) -> MinresAccumulator:
    """
    Accumulator for k = 0: y_0^MR = delta_0 y_0, delta_0^MR = delta_0^2.

    Args:
        c: Right-hand side
        t0: The initial triple (c, 0, 1)

    Returns:
        Accumulator with x_0^MR = 0 and g_0^MR = c
    """
    if t0.k != 0 or np.any(t0.y):
        raise ValueError("minres_init expects the initial triple (c, 0, 1)")
    y_mr = t0.delta * t0.y
    delta_mr = t0.delta ** 2
    x_mr = y_mr / delta_mr
    g_mr = c.copy()
    return MinresAccumulator(
        y_mr=y_mr,
        delta_mr=delta_mr,
        x_mr=x_mr,
        g_mr=g_mr,
        residual_history=[norm2(g_mr)],
        k=0,
    )


def minres_update(
    acc: MinresAccumulator,
    t_new: LanczosTriple,
    q_prev_sq: float,
    H: SymmetricOperator,
    c: np.ndarray,
) -> MinresAccumulator:
    """
    Advance the accumulator from step k to k+1.

    Args:
        acc: Accumulator at step k
        t_new: Triple k+1
        q_prev_sq: q_k^T q_k
        H: Operator, used to form g_{k+1}^MR = H x_{k+1}^MR + c
        c: Right-hand side

    Returns:
        New accumulator; x^MR and g^MR are left unchanged if delta^MR is not positive
    """
    if not q_prev_sq > 0:
        logger.error(f"Minimum-residual update with q_k^T q_k = {q_prev_sq:.3e}")
        raise NonpositiveDenominator(q_prev_sq)

    ratio = dot(t_new.q, t_new.q) / q_prev_sq
    y_mr = ratio * acc.y_mr + t_new.delta * t_new.y
    delta_mr = ratio * acc.delta_mr + t_new.delta ** 2
    if delta_mr > OVERFLOW_GUARD:
        y_mr = RESCALE * y_mr
        delta_mr = RESCALE * delta_mr

    if not delta_mr > 0:
        return replace(acc, y_mr=y_mr, delta_mr=delta_mr, k=t_new.k)

    x_mr = y_mr / delta_mr
    g_mr = H.apply(x_mr) + c
    return MinresAccumulator(
        y_mr=y_mr,
        delta_mr=delta_mr,
        x_mr=x_mr,
        g_mr=g_mr,
        residual_history=[*acc.residual_history, norm2(g_mr)],
        k=t_new.k,
    )


def minres_finalize_incompatible(
    acc: MinresAccumulator,
    y_r: np.ndarray,
    tol: float = SQRT_EPS,
) -> np.ndarray:
    """
    Minimum-norm least-squares solution from x_{r-1}^MR and the certificate.

    Uses x_r^MR = x_{r-1}^MR + gamma_r y_r with
    gamma_r = -(y_r.x_{r-1}^MR) / (y_r.y_r), which removes the null-space
    component and leaves the residual unchanged.

    Args:
        acc: Accumulator at step r-1
        y_r: Certificate of incompatibility
        tol: Smallest accepted ||y_r||

    Returns:
        x_r^MR
    """
    y_norm = norm2(y_r)
    if y_norm <= tol:
        logger.error(f"Certificate norm {y_norm:.3e} below tolerance")
        raise ZeroCertificate(y_norm)
    gamma = -dot(y_r, acc.x_mr) / dot(y_r, y_r)
    return acc.x_mr + gamma * y_r


def solve_minres(
    H: SymmetricOperator,
    c: np.ndarray,
    config: Optional[KrylovConfig] = None,
) -> MinresReport:
    """
    Run the unnormalized Krylov method with the minimum-residual recursions.

    Args:
        H: Symmetric operator
        c: Nonzero right-hand side
        config: Solver configuration

    Returns:
        MinresReport; x_mr solves Hx + c = 0 when compatible and is the
        minimum-norm minimizer of ||Hx + c|| otherwise
    """
    config = config or KrylovConfig()
    start = initial_triple(as_vector(c, H.dim))
    latest = [minres_init(start.q, start)]
    iterates = [latest[0].x_mr] if config.keep_history else None

    def on_step(process: LanczosProcess, triple: LanczosTriple) -> None:
        if process.q_norm <= config.q_tol and abs(triple.delta) <= config.delta_tol:
            # terminal step of an incompatible system, finalized below
            return
        q_prev_sq = dot(process.previous.q, process.previous.q)
        latest[0] = minres_update(latest[0], triple, q_prev_sq, process.H, process.c)
        if iterates is not None:
            iterates.append(latest[0].x_mr)

    process = run_lanczos(H, start.q, config, on_step=on_step)
    report = classify(process, config, method="minres")
    acc = latest[0]
    base = {f.name: getattr(report, f.name) for f in fields(report)}

    if report.verdict == Verdict.INCOMPATIBLE:
        x_mr = minres_finalize_incompatible(acc, report.certificate_y, tol=config.q_tol)
        g_mr = H.apply(x_mr) + process.c
        if iterates is not None:
            iterates.append(x_mr)
        logger.info(f"Minimum-norm least-squares residual {norm2(g_mr):.6g}")
        return MinresReport(
            **base,
            x_mr=x_mr,
            g_mr=g_mr,
            residual_history=[*acc.residual_history, norm2(g_mr)],
            iterates=iterates,
        )

    return MinresReport(
        **base,
        x_mr=acc.x_mr,
        g_mr=acc.g_mr,
        residual_history=list(acc.residual_history),
        x_difference=norm2(report.x - acc.x_mr),
        iterates=iterates,
    )

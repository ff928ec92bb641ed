"""Conjugate gradients as the normalized case (delta_k = 1) of the triple recursion.

With the normalizing scale theta_k = 1/(alpha_k + beta_{k-1}) the triples
become (g_k, x_k, 1), and theta_k is the exact line-search step along

    p_0 = -g_0,    p_k = -g_k + (g_k.g_k / g_{k-1}.g_{k-1}) p_{k-1}.
"""
from typing import Optional
import logging

import numpy as np

from .errors import DidNotTerminate, NonpositiveCurvature, ZeroRightHandSide
from .models import (
    CgState,
    IterationTrace,
    KrylovConfig,
    LanczosTriple,
    SolveReport,
    Status,
    Verdict,
)
from .operator import SymmetricOperator, as_vector, dot, norm2

logger = logging.getLogger("unnormalized_krylov.cg")


def cg_start(c: np.ndarray) -> CgState:
    """State at x_0 = 0: g_0 = c, p_0 = -c."""
    return CgState(x=np.zeros_like(c), g=c.copy(), p=-c, g_dot_g=dot(c, c), k=0)


def cg_step(H: SymmetricOperator, state: CgState) -> tuple[CgState, float]:
    """
    One conjugate-gradient step.

    Args:
        H: Operator, positive definite along the search direction
        state: Current state

    Returns:
        (next state, step length theta_k = -g_k.p_k / p_k.H p_k)

    Raises:
        NonpositiveCurvature: p_k.H p_k <= 0
    """
    hp = H.apply(state.p)
    curvature = dot(state.p, hp)
    if curvature <= 0:
        logger.error(f"Nonpositive curvature {curvature:.3e} at step {state.k}")
        raise NonpositiveCurvature(state.k, curvature, state.p.copy())

    theta = -dot(state.g, state.p) / curvature
    x = state.x + theta * state.p
    g = state.g + theta * hp
    g_dot_g = dot(g, g)
    p = -g + (g_dot_g / state.g_dot_g) * state.p
    return CgState(x=x, g=g, p=p, g_dot_g=g_dot_g, k=state.k + 1), theta


def solve_cg(
    H: SymmetricOperator,
    c: np.ndarray,
    config: Optional[KrylovConfig] = None,
) -> SolveReport:
    """
    Solve Hx + c = 0 by conjugate gradients.

    Intended for H positive semidefinite with c in the range of H.
    Stops when ||g_k|| <= q_tol * ||c||.

    Args:
        H: Symmetric operator
        c: Nonzero right-hand side
        config: q_tol, max_iter and keep_history are used; scaling is ignored

    Returns:
        SolveReport with verdict compatible; with keep_history the
        iterates are recorded as triples (g_k, x_k, 1)
    """
    config = config or KrylovConfig()
    c = as_vector(c, H.dim)
    if not np.any(c):
        raise ZeroRightHandSide()

    c_norm = norm2(c)
    limit = config.iteration_limit(H.dim)
    state = cg_start(c)
    trace = IterationTrace()
    trace.record_start(c_norm, 1.0)
    history = [_as_triple(state)] if config.keep_history else None
    previous_theta: Optional[float] = None
    previous_gg = 0.0  # g_{k-1}.g_{k-1}

    while np.sqrt(state.g_dot_g) > config.q_tol * c_norm and state.k < limit:
        gg = state.g_dot_g
        state, theta = cg_step(H, state)
        # alpha_k and beta_{k-1} of the normalized recursion, from CG scalars
        if previous_theta is None:
            beta = None
            alpha = 1.0 / theta
        else:
            beta = -(gg / previous_gg) / previous_theta
            alpha = 1.0 / theta - beta
        trace.record_step(alpha, beta, theta, float(np.sqrt(state.g_dot_g)), 1.0)
        previous_theta, previous_gg = theta, gg
        if history is not None:
            history.append(_as_triple(state))

    g_norm = float(np.sqrt(state.g_dot_g))
    report = SolveReport(
        method="cg",
        verdict=Verdict.COMPATIBLE,
        status=Status.CONVERGED,
        r=state.k,
        delta_r=1.0,
        residual_norm=norm2(H.apply(state.x) + c),
        trace=trace,
        x=state.x,
        history=history,
    )
    if g_norm > config.q_tol * c_norm:
        report.verdict = Verdict.UNDETERMINED
        report.status = Status.MAX_ITER_REACHED
        logger.error(f"CG stopped after {state.k} steps with |g| = {g_norm:.3e}")
        raise DidNotTerminate(state.k, g_norm, report)

    logger.info(f"CG converged in {state.k} steps, |Hx+c| = {report.residual_norm:.3e}")
    return report


def _as_triple(state: CgState) -> LanczosTriple:
    return LanczosTriple(q=state.g, y=state.x, delta=1.0, k=state.k)


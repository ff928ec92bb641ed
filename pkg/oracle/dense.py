"""Brute-force dense reference computations.

These never touch the triple recursions, so tests can hold the solvers
against them: direct solves, a cyclic Jacobi eigendecomposition, the
pseudoinverse solution, the explicit Krylov basis and the closed-form
minimum-residual quadratic program.
"""
from typing import Optional, Sequence
import logging

import numpy as np

from krylov.errors import SingularMatrix, ZeroQInBasis, ZeroRightHandSide
from krylov.models import LanczosTriple
from krylov.operator import DenseSymmetric, SymmetricOperator, as_vector

from .models import EigenDecomposition, KrylovBasis

logger = logging.getLogger("unnormalized_krylov.oracle")

# Dense solves refuse matrices with a larger condition estimate
MAX_CONDITION = 1e12

# Jacobi stops once the off-diagonal Frobenius norm drops below this
# fraction of the full Frobenius norm
JACOBI_TOL = 1e-12
# Off-diagonal entries below EPS times the diagonal pair are dropped without a rotation
EPS = float(np.finfo(np.float64).eps)
JACOBI_MAX_SWEEPS = 100

NULLSPACE_TOL = 1e-10
KRYLOV_RANK_TOL = 1e-10


def dense_solve(H: DenseSymmetric, b: np.ndarray) -> np.ndarray:
    """
    Solve Hx = b directly.

    Args:
        H: Dense, numerically nonsingular matrix
        b: Right-hand side

    Returns:
        x with Hx = b
    """
    b = as_vector(b, H.n)
    condition = float(np.linalg.cond(H.entries))
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        logger.error(f"Refusing dense solve, condition estimate {condition:.3e}")
        raise SingularMatrix(condition)
    return np.linalg.solve(H.entries, b)


def eigendecompose(H: DenseSymmetric) -> EigenDecomposition:
    """
    Symmetric eigendecomposition by cyclic Jacobi rotations.

    Args:
        H: Dense symmetric matrix

    Returns:
        EigenDecomposition with ascending eigenvalues and orthonormal vectors
    """
    a = np.array(H.entries, dtype=np.float64)
    n = a.shape[0]
    v = np.eye(n)
    total = float(np.linalg.norm(a, "fro"))
    sweeps = 0

    def off_norm() -> float:
        return float(np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0)))

    while sweeps < JACOBI_MAX_SWEEPS and off_norm() > JACOBI_TOL * total:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                if abs(apq) <= EPS * (abs(a[p, p]) + abs(a[q, q])):
                    a[p, q] = a[q, p] = 0.0
                    continue
                phi = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(phi) / (abs(phi) + np.sqrt(phi * phi + 1.0)) if phi != 0 else 1.0
                cs = 1.0 / np.sqrt(t * t + 1.0)
                sn = t * cs
                # A <- J^T A J with J the rotation in the (p, q) plane
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = cs * ap - sn * aq
                a[:, q] = sn * ap + cs * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = cs * ap - sn * aq
                a[q, :] = sn * ap + cs * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = cs * vp - sn * vq
                v[:, q] = sn * vp + cs * vq

    if off_norm() > JACOBI_TOL * total:
        logger.warning(f"Jacobi stopped after {sweeps} sweeps, off-diagonal {off_norm():.3e}")

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return EigenDecomposition(eigenvalues[order], v[:, order], sweeps)


def nullspace_basis(ed: EigenDecomposition, tol: float = NULLSPACE_TOL) -> np.ndarray:
    """
    Orthonormal basis Z of N(H).

    Args:
        ed: Eigendecomposition of H
        tol: Eigenvalues with |lambda| <= tol * max|lambda| count as zero

    Returns:
        n x d array, with d = 0 when H is nonsingular
    """
    return ed.eigenvectors[:, ed.null_mask(tol)]


def pinv_solve(ed: EigenDecomposition, c: np.ndarray, tol: float = NULLSPACE_TOL) -> np.ndarray:
    """
    Minimum-norm minimizer of ||Hx + c||, that is x = -H^+ c.

    Args:
        ed: Eigendecomposition of H
        c: Right-hand side
        tol: Relative threshold separating null eigenvalues

    Returns:
        -sum over nonnull modes of (v_i.c / lambda_i) v_i
    """
    c = as_vector(c, ed.eigenvectors.shape[0])
    keep = ~ed.null_mask(tol)
    v = ed.eigenvectors[:, keep]
    return -v @ ((v.T @ c) / ed.eigenvalues[keep])


def min_residual_norm(ed: EigenDecomposition, c: np.ndarray, tol: float = NULLSPACE_TOL) -> float:
    """min over x of ||Hx + c||, which equals ||Z Z^T c||."""
    z = nullspace_basis(ed, tol)
    return float(np.linalg.norm(z.T @ as_vector(c, ed.eigenvectors.shape[0])))


def is_compatible(ed: EigenDecomposition, c: np.ndarray, tol: float = 1e-8) -> bool:
    """Whether c lies in R(H), decided by ||Z Z^T c|| <= tol * ||c||."""
    c = as_vector(c)
    return min_residual_norm(ed, c) <= tol * float(np.linalg.norm(c))


def krylov_grade(
    H: SymmetricOperator,
    c: np.ndarray,
    tol: float = KRYLOV_RANK_TOL,
) -> tuple[KrylovBasis, int]:
    """
    Grade r of c with respect to H from the explicit power basis.

    Columns are appended until H^r c lies in the span of the previous
    ones. Dependence is judged on normalized columns by Gram-Schmidt (run
    twice) with residual threshold ``tol``.

    Args:
        H: Operator
        c: Nonzero vector

    Returns:
        (basis holding columns c .. H^r c, r)
    """
    c = as_vector(c, H.dim)
    if not np.any(c):
        raise ZeroRightHandSide()

    basis = KrylovBasis(columns=[c.copy()])
    orthonormal: list[np.ndarray] = [c / np.linalg.norm(c)]
    column = c.copy()
    while True:
        column = H.apply(column)
        basis.columns.append(column)
        norm = float(np.linalg.norm(column))
        if norm == 0.0 or len(orthonormal) == H.dim:
            break
        w = column / norm
        for _ in range(2):
            for u in orthonormal:
                w = w - np.dot(u, w) * u
        residual = float(np.linalg.norm(w))
        if residual <= tol:
            break
        orthonormal.append(w / residual)

    basis.rank = len(orthonormal)
    return basis, basis.rank


def spectral_grade(ed: EigenDecomposition, c: np.ndarray, tol: float = 1e-8) -> int:
    """
    Count the distinct eigenvalues on whose eigenspace c has a component.

    Eigenvalues within ``tol * max|lambda|`` of each other are merged.
    """
    weights = ed.eigenvectors.T @ as_vector(c, ed.eigenvectors.shape[0])
    scale = max(ed.scale, 1.0)
    grade = 0
    group_weight = 0.0
    group_start: Optional[float] = None
    for lam, w in zip(ed.eigenvalues, weights):
        if group_start is None or lam - group_start > tol * scale:
            if group_weight > tol * np.linalg.norm(weights):
                grade += 1
            group_start = lam
            group_weight = 0.0
        group_weight = float(np.hypot(group_weight, w))
    if group_weight > tol * np.linalg.norm(weights):
        grade += 1
    return grade


def minres_qp(
    H: SymmetricOperator,
    c: np.ndarray,
    k: int,
    triples: Sequence[LanczosTriple],
) -> tuple[list[float], np.ndarray]:
    """
    Closed-form solution of the minimum-residual quadratic program over K_k.

    minimize 1/2 sum gamma_i^2 q_i.q_i subject to sum gamma_i delta_i = 1,
    solved by gamma_i = (delta_i / q_i.q_i) / sum_j (delta_j^2 / q_j.q_j).

    Args:
        H: Operator (only its dimension is checked)
        c: Right-hand side
        k: Subspace index, k < r
        triples: Triples 0..k of any scaling

    Returns:
        (gammas, x = sum gamma_i y_i)
    """
    as_vector(c, H.dim)
    used = list(triples[: k + 1])
    qq = [float(np.dot(t.q, t.q)) for t in used]
    for i, value in enumerate(qq):
        if value == 0.0:
            raise ZeroQInBasis(i)
    total = sum(t.delta ** 2 / value for t, value in zip(used, qq))
    gammas = [(t.delta / value) / total for t, value in zip(used, qq)]
    x = np.zeros(H.dim)
    for gamma, t in zip(gammas, used):
        x = x + gamma * t.y
    return gammas, x


def krylov_lstsq(H: DenseSymmetric, c: np.ndarray, k: int) -> np.ndarray:
    """
    Minimizer of ||Hx + c|| over K_k(c, H) from an orthonormalized power basis.

    Args:
        H: Dense operator
        c: Right-hand side
        k: Subspace dimension (k = 0 gives x = 0)

    Returns:
        x in K_k
    """
    c = as_vector(c, H.n)
    if k == 0:
        return np.zeros_like(c)
    columns = [c / np.linalg.norm(c)]
    for _ in range(k - 1):
        nxt = H.entries @ columns[-1]
        columns.append(nxt / np.linalg.norm(nxt))
    q, _ = np.linalg.qr(np.column_stack(columns))
    coeffs, *_ = np.linalg.lstsq(H.entries @ q, -c, rcond=None)
    return q @ coeffs

"""Random test problems with controlled spectra.

Every builder takes a ``numpy.random.Generator`` so callers decide the seed.
Matrices are Q diag(lambda) Q^T with Q a random orthogonal matrix and c is
assembled in the eigenbasis, so compatibility and the grade are known exactly.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from krylov.operator import DenseSymmetric, make_dense


class Family(str, Enum):
    NONSINGULAR = "nonsingular"
    SINGULAR_COMPATIBLE = "singular_compatible"
    SINGULAR_INCOMPATIBLE = "singular_incompatible"
    POSITIVE_DEFINITE = "positive_definite"
    POSITIVE_SEMIDEFINITE = "positive_semidefinite"


@dataclass(frozen=True)
class RandomInstance:
    """A generated problem with its construction data."""
    H: DenseSymmetric
    c: np.ndarray
    family: Family
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    weights: np.ndarray  # c = eigenvectors @ weights

    @property
    def n(self) -> int:
        return self.H.n

    @property
    def compatible(self) -> bool:
        null = self.eigenvalues == 0.0
        return not np.any(self.weights[null])

    @property
    def grade(self) -> int:
        """Distinct eigenvalues carrying a nonzero weight."""
        return len(set(self.eigenvalues[self.weights != 0.0].tolist()))

    @property
    def null_basis(self) -> np.ndarray:
        return self.eigenvectors[:, self.eigenvalues == 0.0]


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed orthogonal matrix from the QR factors of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def spaced_eigenvalues(
    rng: np.random.Generator,
    count: int,
    low: float,
    high: float,
    gap: float = 0.5,
) -> np.ndarray:
    """
    ``count`` distinct nonzero values in [low, high], at least ``gap`` apart.

    Values are drawn from a grid of spacing ``gap`` that skips zero.
    """
    grid = np.arange(low, high + gap / 2, gap)
    grid = grid[np.abs(grid) > gap / 2]
    if count > grid.size:
        raise ValueError(f"cannot place {count} eigenvalues in [{low}, {high}] with gap {gap}")
    return np.sort(rng.choice(grid, size=count, replace=False))


def random_weights(rng: np.random.Generator, n: int) -> np.ndarray:
    """Weights with |w| in [0.5, 2] and random signs."""
    return rng.uniform(0.5, 2.0, size=n) * rng.choice([-1.0, 1.0], size=n)


def build_instance(
    family: Family,
    eigenvalues: np.ndarray,
    weights: np.ndarray,
    eigenvectors: np.ndarray,
) -> RandomInstance:
    """Assemble H = V diag(lambda) V^T and c = V w."""
    entries = eigenvectors @ np.diag(eigenvalues) @ eigenvectors.T
    return RandomInstance(
        H=make_dense(0.5 * (entries + entries.T)),
        c=eigenvectors @ weights,
        family=family,
        eigenvalues=np.asarray(eigenvalues, dtype=np.float64),
        eigenvectors=eigenvectors,
        weights=np.asarray(weights, dtype=np.float64),
    )


def random_instance(
    rng: np.random.Generator,
    family: Family,
    n: int,
    null_dim: Optional[int] = None,
) -> RandomInstance:
    """
    Draw one instance of the given family.

    Args:
        rng: Random generator
        family: Problem family
        n: Dimension, at least 2
        null_dim: Dimension of N(H) for the singular families (random in
            [1, n // 2] when omitted)

    Returns:
        RandomInstance
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    v = random_orthogonal(rng, n)
    w = random_weights(rng, n)

    if family in (Family.NONSINGULAR, Family.POSITIVE_DEFINITE):
        low = 0.5 if family == Family.POSITIVE_DEFINITE else -n / 2
        lam = spaced_eigenvalues(rng, n, low, low + n if low > 0 else n / 2)
        return build_instance(family, lam, w, v)

    d = null_dim if null_dim is not None else int(rng.integers(1, n // 2 + 1))
    if not 1 <= d < n:
        raise ValueError(f"null_dim must lie in [1, {n - 1}]")
    if family == Family.POSITIVE_SEMIDEFINITE:
        nonzero = spaced_eigenvalues(rng, n - d, 0.5, 0.5 + n)
    else:
        nonzero = spaced_eigenvalues(rng, n - d, -n / 2, n / 2)
    lam = np.concatenate([np.zeros(d), nonzero])

    if family in (Family.SINGULAR_COMPATIBLE, Family.POSITIVE_SEMIDEFINITE):
        w[:d] = 0.0
    return build_instance(family, lam, w, v)


def mixed_instances(rng: np.random.Generator, count: int, n_max: int = 30) -> list[RandomInstance]:
    """
    A reproducible mix cycling through the nonsingular, singular-compatible
    and singular-incompatible families, n in [2, n_max].
    """
    families = [Family.NONSINGULAR, Family.SINGULAR_COMPATIBLE, Family.SINGULAR_INCOMPATIBLE]
    return [
        random_instance(rng, families[i % 3], int(rng.integers(2, n_max + 1)))
        for i in range(count)
    ]


def random_spd(rng: np.random.Generator, n: int) -> DenseSymmetric:
    """A positive definite matrix A A^T + n I."""
    a = rng.standard_normal((n, n))
    return make_dense(a @ a.T + n * np.eye(n))


def random_rank_deficient(rng: np.random.Generator, n: int, rank: int) -> DenseSymmetric:
    """A A^T with A of shape (n, rank), so dim N(H) = n - rank."""
    a = rng.standard_normal((n, rank))
    return make_dense(a @ a.T)

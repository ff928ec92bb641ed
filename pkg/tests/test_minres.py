"""Tests for the minimum-residual recursions."""
import numpy as np
import pytest

from krylov.demos import compatible_demo, incompatible_demo
from krylov.errors import NonpositiveDenominator, ZeroCertificate
from krylov.lanczos import initial_triple, next_triple
from krylov.minres import (
    OVERFLOW_GUARD,
    minres_finalize_incompatible,
    minres_init,
    minres_update,
    solve_minres,
)
from krylov.models import KrylovConfig, LanczosTriple, ScalingStrategy, Verdict
from krylov.operator import make_dense, make_diagonal
from oracle.dense import eigendecompose, krylov_lstsq, min_residual_norm, nullspace_basis, pinv_solve

# Minimum-residual iterates k = 1..6 of the incompatible example, one row per k
INCOMPATIBLE_XMR = [
    [-0.1588, -0.1059, -0.0529, -0.0529, 0.0529, 0.1059, 0.1588],
    [-0.6633, -0.0228, 0.0585, 0.1284, -0.1983, -0.5364, -1.0143],
    [-0.6143, -0.6647, -0.2817, -0.1845, 0.0407, -0.2994, -1.1600],
    [-0.5995, -1.0640, -0.2148, 0.1376, -0.4178, -1.0375, -0.9990],
    [-0.5998, -1.0371, -0.4441, -0.1481, -0.2588, -1.0794, -0.9938],
    [-0.6000, -1.0000, -1.0000, 0.1333, -1.0000, -1.0000, -1.0000],
]


class TestMinresInit:
    """Test the k = 0 accumulator."""

    def test_origin(self):
        demo = incompatible_demo()
        acc = minres_init(demo.c, initial_triple(demo.c))
        np.testing.assert_array_equal(acc.x_mr, np.zeros(7))
        np.testing.assert_array_equal(acc.g_mr, demo.c)
        assert acc.delta_mr == 1.0
        assert acc.residual_history == [pytest.approx(np.sqrt(29))]

    def test_scalar(self):
        c = np.array([1.0])
        acc = minres_init(c, initial_triple(c))
        assert acc.g_mr.tolist() == [1.0]

    def test_rejects_other_triples(self):
        c = np.array([1.0, 2.0])
        with pytest.raises(ValueError):
            minres_init(c, LanczosTriple(c, c, 1.0, 1))


class TestMinresUpdate:
    """Test one accumulator step."""

    def test_first_step_example(self):
        demo = incompatible_demo()
        t0 = initial_triple(demo.c)
        t1, *_ = next_triple(demo.H, demo.c, t0, None)
        acc = minres_update(minres_init(demo.c, t0), t1, t0.q @ t0.q, demo.H, demo.c)
        np.testing.assert_allclose(acc.x_mr, INCOMPATIBLE_XMR[0], atol=5e-4)
        assert acc.k == 1

    def test_stagnation(self):
        """A zero delta leaves x^MR unchanged."""
        demo = compatible_demo()
        t0 = initial_triple(demo.c)
        t1, *_ = next_triple(demo.H, demo.c, t0, None)
        acc0 = minres_init(demo.c, t0)
        acc1 = minres_update(acc0, t1, t0.q @ t0.q, demo.H, demo.c)
        np.testing.assert_allclose(acc1.x_mr, acc0.x_mr, atol=1e-15)

    def test_nonpositive_denominator(self):
        c = np.array([1.0, 2.0])
        t0 = initial_triple(c)
        with pytest.raises(NonpositiveDenominator):
            minres_update(minres_init(c, t0), t0, 0.0, make_diagonal([1.0, 1.0]), c)

    def test_overflow_rescale(self):
        """Large accumulators are rescaled without changing x^MR."""
        c = np.array([1.0, 2.0])
        H = make_diagonal([1.0, 3.0])
        t0 = initial_triple(c)
        t1, *_ = next_triple(H, c, t0, None)
        big = minres_init(c, t0)
        big.y_mr = np.array([3.0, -1.0]) * 1e160
        big.delta_mr = 2e160
        acc = minres_update(big, t1, t0.q @ t0.q, H, c)
        assert acc.delta_mr < OVERFLOW_GUARD
        np.testing.assert_allclose(acc.x_mr, [1.5, -0.5], rtol=1e-12)


class TestFinalize:
    """Test the minimum-norm finalization."""

    def test_orthogonal_unchanged(self):
        """gamma is zero when x is already orthogonal to y_r."""
        acc = minres_init(np.array([1.0, 0.0]), initial_triple(np.array([1.0, 0.0])))
        acc.x_mr = np.array([1.0, 0.0])
        x = minres_finalize_incompatible(acc, np.array([0.0, 2.0]))
        np.testing.assert_array_equal(x, [1.0, 0.0])

    def test_zero_certificate(self):
        acc = minres_init(np.array([1.0, 0.0]), initial_triple(np.array([1.0, 0.0])))
        with pytest.raises(ZeroCertificate):
            minres_finalize_incompatible(acc, np.zeros(2))


class TestSolveMinres:
    """Test complete minimum-residual runs."""

    def test_incompatible_example(self):
        """Reproduces the printed iterates and the minimum-norm solution."""
        demo = incompatible_demo()
        report = solve_minres(demo.H, demo.c, KrylovConfig(keep_history=True))
        assert report.verdict == Verdict.INCOMPATIBLE
        assert report.r == 7
        np.testing.assert_allclose(report.x_mr, [-0.6, -1, -1, 0, -1, -1, -1], atol=1e-3)
        residual = np.linalg.norm(demo.H.apply(report.x_mr) + demo.c)
        assert residual ** 2 == pytest.approx(1.0, abs=1e-8)
        for k, expected in enumerate(INCOMPATIBLE_XMR, start=1):
            np.testing.assert_allclose(report.iterates[k], expected, atol=5e-4)
        assert report.x_mr @ report.certificate_y == pytest.approx(0.0, abs=1e-10)
        assert np.linalg.norm(report.x_mr) <= np.linalg.norm(report.iterates[-2]) + 1e-12

    def test_compatible_example(self):
        """x_mr equals x of the plain solver."""
        demo = compatible_demo()
        report = solve_minres(demo.H, demo.c)
        assert report.compatible
        np.testing.assert_allclose(report.x_mr, [-1, -1, -1, 0, -1, -1, -1], atol=1e-6)
        assert report.x_difference <= 1e-8

    def test_identity(self):
        c = np.array([1.0, -3.0])
        report = solve_minres(make_diagonal([1.0, 1.0]), c)
        np.testing.assert_allclose(report.x_mr, -c)
        assert report.r == 1

    def test_residual_history_nonincreasing(self):
        for demo in (compatible_demo(), incompatible_demo()):
            history = solve_minres(demo.H, demo.c).residual_history
            assert all(b <= a + 1e-10 for a, b in zip(history, history[1:]))

    def test_stagnation_pairing(self):
        """x^MR stalls exactly at the steps with delta_k = 0, never twice in a row."""
        demo = compatible_demo()
        report = solve_minres(demo.H, demo.c, KrylovConfig(keep_history=True))
        stalled = [
            k for k in range(1, report.r)
            if np.linalg.norm(report.iterates[k] - report.iterates[k - 1])
            <= 1e-12 * max(1.0, np.linalg.norm(report.iterates[k]))
        ]
        zero_delta = [k for k in range(1, report.r) if abs(report.trace.deltas[k]) <= 1e-8]
        assert stalled == zero_delta == [1, 3, 5]

    def test_matches_krylov_least_squares(self):
        """Every x_k^MR minimizes ||Hx + c|| over K_k."""
        rng = np.random.default_rng(20)
        lam = np.array([-4.0, -3.0, -1.5, -0.5, 0.5, 1.0, 2.0, 3.5, 4.5])
        q, _ = np.linalg.qr(rng.standard_normal((9, 9)))
        a = (q * lam) @ q.T
        H = make_dense(0.5 * (a + a.T))
        c = rng.standard_normal(9)
        report = solve_minres(H, c, KrylovConfig(keep_history=True, reorthogonalize=True))
        for k in range(1, 7):
            expected = krylov_lstsq(H, c, k)
            assert np.linalg.norm(report.iterates[k] - expected) <= 1e-8 * max(1.0, np.linalg.norm(expected))

    def test_incompatible_random_minimum_norm(self):
        """On a random incompatible system x_mr = -H^+ c."""
        rng = np.random.default_rng(21)
        lam = np.array([0.0, 0.0, -2.0, -1.0, 1.0, 1.5, 3.0])
        q, _ = np.linalg.qr(rng.standard_normal((7, 7)))
        a = (q * lam) @ q.T
        H = make_dense(0.5 * (a + a.T))
        c = rng.standard_normal(7)
        report = solve_minres(H, c, KrylovConfig(reorthogonalize=True))
        assert report.verdict == Verdict.INCOMPATIBLE
        ed = eigendecompose(H)
        expected = pinv_solve(ed, c)
        np.testing.assert_allclose(report.x_mr, expected, atol=1e-6)
        z = nullspace_basis(ed)
        assert np.linalg.norm(z.T @ report.x_mr) <= 1e-6 * np.linalg.norm(report.x_mr)
        residual = np.linalg.norm(H.apply(report.x_mr) + c)
        assert residual == pytest.approx(min_residual_norm(ed, c), rel=1e-8)

    def test_scaling_independent(self):
        """YNORM, QNORM and UNIT produce the same iterates."""
        demo = incompatible_demo()
        runs = [
            solve_minres(demo.H, demo.c, KrylovConfig(strategy=s, keep_history=True))
            for s in (ScalingStrategy.YNORM, ScalingStrategy.QNORM, ScalingStrategy.UNIT)
        ]
        for other in runs[1:]:
            for a, b in zip(runs[0].iterates, other.iterates):
                assert np.linalg.norm(a - b) <= 1e-8 * max(1.0, np.linalg.norm(a))

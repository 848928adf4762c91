import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvsumm.errors import DataError
from mvsumm.solvers import (
    SolverConfig,
    l21_norm,
    selfexpress_lambda0,
    solve_l1_selfexpress,
    update_P,
    z_step,
)

from reference import cd_lasso, smoothed_l1_objective

TIGHT = SolverConfig(epsilon=1e-12, max_iters=3000, rel_tol=1e-14)


class TestSolveL1SelfExpress:
    def test_exact_self_representation_at_tiny_penalty(self):
        dictionary = np.eye(2)
        target = np.array([[1.0], [0.0]])
        codes, _ = solve_l1_selfexpress(dictionary, target, 1e-6)
        np.testing.assert_allclose(codes[:, 0], [1.0, 0.0], atol=1e-3)

    def test_zero_solution_above_lambda0(self):
        rng = np.random.default_rng(0)
        dictionary = rng.standard_normal((6, 8))
        target = rng.standard_normal((6, 1))
        lam0 = selfexpress_lambda0(dictionary, target)
        codes, _ = solve_l1_selfexpress(dictionary, target, 1.5 * lam0)
        assert np.abs(codes).max() <= 1e-3

    def test_two_atom_problem_matches_cd_oracle(self):
        dictionary = np.array([[1.0, 0.0], [0.0, 1.0]])
        target = np.array([[0.7071], [0.7071]])
        lam = 0.1
        codes, _ = solve_l1_selfexpress(dictionary, target, lam, cfg=TIGHT)
        oracle = cd_lasso(dictionary, target, lam)
        ours = smoothed_l1_objective(dictionary, target, codes, lam, TIGHT.epsilon)
        ref = smoothed_l1_objective(dictionary, target, oracle[:, None], lam, TIGHT.epsilon)
        assert abs(ours - ref) <= 1e-4 * abs(ref)

    def test_monotone_objective(self):
        rng = np.random.default_rng(3)
        dictionary = rng.standard_normal((10, 15))
        targets = rng.standard_normal((10, 4))
        _, history = solve_l1_selfexpress(dictionary, targets, 0.3)
        assert np.all(np.diff(history) <= 1e-9)

    def test_oracle_gap_on_random_problems(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            dictionary = rng.standard_normal((10, 15))
            target = rng.standard_normal((10, 1))
            lam = selfexpress_lambda0(dictionary, target) / rng.uniform(2, 20)
            codes, _ = solve_l1_selfexpress(dictionary, target, lam, cfg=TIGHT)
            oracle = cd_lasso(dictionary, target[:, 0], lam)
            ours = smoothed_l1_objective(dictionary, target, codes, lam, TIGHT.epsilon)
            ref = smoothed_l1_objective(dictionary, target, oracle[:, None], lam, TIGHT.epsilon)
            assert abs(ours - ref) <= 1e-4 * abs(ref)

    def test_zero_diagonal_is_exact(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal((8, 6))
        codes, _ = solve_l1_selfexpress(x, x, 0.2, zero_diagonal=True)
        np.testing.assert_array_equal(np.diag(codes), np.zeros(6))

    def test_zero_diagonal_requires_square(self):
        rng = np.random.default_rng(5)
        with pytest.raises(DataError, match="square"):
            solve_l1_selfexpress(
                rng.standard_normal((4, 3)), rng.standard_normal((4, 2)),
                0.1, zero_diagonal=True,
            )

    def test_rejects_bad_inputs(self):
        good = np.eye(2)
        with pytest.raises(DataError, match="lambda"):
            solve_l1_selfexpress(good, good, 0.0)
        with pytest.raises(DataError, match="non-finite"):
            solve_l1_selfexpress(np.array([[np.inf, 0], [0, 1.0]]), good, 0.1)
        with pytest.raises(DataError, match="feature dimension"):
            solve_l1_selfexpress(np.eye(3), good, 0.1)


class TestLambda0:
    def test_zero_diagonal_masks_self_correlation(self):
        x = np.eye(3)
        assert selfexpress_lambda0(x, x) == 2.0
        assert selfexpress_lambda0(x, x, zero_diagonal=True) == 0.0


class TestL21Norm:
    def test_identity(self):
        assert l21_norm(np.eye(3)) == pytest.approx(3.0)

    def test_zero(self):
        assert l21_norm(np.zeros((4, 4))) == 0.0

    def test_pythagorean_rows(self):
        z = np.array([[3.0, 4.0], [0.0, 0.0]])
        assert l21_norm(z) == pytest.approx(5.0)

    def test_weighted(self):
        z = np.array([[3.0, 4.0], [1.0, 0.0]])
        assert l21_norm(z, np.array([2.0, 3.0])) == pytest.approx(13.0)


class TestUpdateP:
    def test_zero_row(self):
        p = update_P(np.zeros((1, 3)), 1e-8)
        assert p[0] == pytest.approx(5000.0)

    def test_unit_row(self):
        p = update_P(np.array([[1.0, 0.0]]), 1e-8)
        assert p[0] == pytest.approx(0.5, abs=1e-8)

    def test_weighted_row(self):
        p = update_P(np.array([[1.0, 0.0]]), 1e-8, row_weights=np.array([2.0]))
        assert p[0] == pytest.approx(1.0, abs=1e-7)

    def test_weighted_matches_finite_difference(self):
        # P_ii should be the derivative of sqrt(q^2 t + eps) in t = ||z^i||^2.
        rng = np.random.default_rng(2)
        z = rng.standard_normal((5, 4))
        q = rng.uniform(0.5, 3.0, size=5)
        eps = 1e-8
        p = update_P(z, eps, row_weights=q)
        t = np.sum(z * z, axis=1)
        h = 1e-7
        fd = (np.sqrt(q * q * (t + h) + eps) - np.sqrt(q * q * (t - h) + eps)) / (2 * h)
        np.testing.assert_allclose(p, fd, rtol=1e-5)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**31), n=st.integers(1, 12))
    def test_always_positive(self, seed, n):
        rng = np.random.default_rng(seed)
        z = rng.standard_normal((n, n)) * rng.uniform(0, 10)
        assert update_P(z, 1e-8).min() > 0

    def test_rejects_nonpositive_weights(self):
        with pytest.raises(DataError):
            update_P(np.eye(2), 1e-8, row_weights=np.array([1.0, 0.0]))


class TestZStep:
    def test_identity_embedding(self):
        z = z_step(np.eye(2), np.ones(2), 1.0)
        np.testing.assert_allclose(z, 0.5 * np.eye(2), atol=1e-12)

    def test_rank_one_hand_solve(self):
        z = z_step(np.array([[1.0, 1.0]]), np.ones(2), 1.0)
        np.testing.assert_allclose(z, np.full((2, 2), 1.0 / 3.0), atol=1e-12)

    def test_small_lambda_full_rank_limit(self):
        rng = np.random.default_rng(4)
        y = rng.standard_normal((5, 5))
        z = z_step(y, np.ones(5), 1e-12)
        np.testing.assert_allclose(z, np.eye(5), atol=1e-5)

    def test_residual_bound(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            d, n = rng.integers(2, 6), rng.integers(4, 12)
            y = rng.standard_normal((d, n))
            p = rng.uniform(0.1, 5.0, size=n)
            lam = rng.uniform(0.01, 2.0)
            z = z_step(y, p, lam)
            gram = y.T @ y
            resid = np.linalg.norm((gram + lam * np.diag(p)) @ z - gram)
            assert resid <= 1e-8 * np.linalg.norm(gram)

    def test_rejects_invalid_p(self):
        with pytest.raises(DataError, match="strictly positive"):
            z_step(np.eye(2), np.array([1.0, 0.0]), 1.0)

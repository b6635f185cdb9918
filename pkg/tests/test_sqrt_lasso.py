import numpy as np
import pytest

from solvers import SolverOptions, fit_sqrt_lasso


def test_orthogonal_target_gives_zero():
    target = np.array([1.0, 1.0, 0.0, 0.0])
    others = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    fit = fit_sqrt_lasso(target, others, 1.0)
    np.testing.assert_array_equal(fit.gamma, 0.0)
    assert fit.sigma == pytest.approx(np.sqrt(0.5))
    assert not fit.degenerate


def test_proportional_target_interpolates(rng):
    column = rng.standard_normal(50)
    fit = fit_sqrt_lasso(2.0 * column, column[:, None], 1e-6)
    assert fit.gamma[0] == pytest.approx(2.0, abs=1e-5)


def test_empty_design():
    fit = fit_sqrt_lasso(np.ones(5), np.zeros((5, 0)), 0.5)
    assert fit.gamma.shape == (0,)
    assert fit.sigma == pytest.approx(1.0)


def test_zero_target_is_degenerate():
    fit = fit_sqrt_lasso(np.zeros(6), np.ones((6, 2)), 0.5)
    assert fit.degenerate
    np.testing.assert_array_equal(fit.gamma, 0.0)


@pytest.mark.parametrize("seed", range(3))
def test_matches_grid_oracle(seed):
    r = np.random.default_rng(seed)
    others = r.standard_normal((50, 2))
    target = others @ np.array([0.8, -0.4]) + r.standard_normal(50)
    lam = 0.1
    fit = fit_sqrt_lasso(target, others, lam)

    axis = np.arange(-2.0, 2.0 + 1e-9, 1e-2)
    g1, g2 = np.meshgrid(axis, axis, indexing='ij')
    G = np.stack([g1.ravel(), g2.ravel()], axis=1)
    resid = target[:, None] - others @ G.T
    values = np.linalg.norm(resid, axis=0) / np.sqrt(50) + 2 * lam * np.abs(G).sum(axis=1)
    assert fit.objective(target, others, lam) <= values.min() + 1e-4


def test_scaled_residual_kkt(rng):
    others = rng.standard_normal((80, 6))
    target = others[:, 0] - 0.5 * others[:, 3] + rng.standard_normal(80)
    fit = fit_sqrt_lasso(target, others, 0.05, SolverOptions())
    grad = others.T @ (target - others @ fit.gamma) / 80
    active = fit.gamma != 0
    np.testing.assert_allclose(grad[active], fit.lambda_effective * np.sign(fit.gamma[active]), atol=1e-9)
    assert np.all(np.abs(grad[~active]) <= fit.lambda_effective + 1e-9)
    sigma = np.linalg.norm(target - others @ fit.gamma) / np.sqrt(80)
    assert fit.lambda_effective == pytest.approx(2 * 0.05 * fit.sigma)
    assert fit.sigma == pytest.approx(sigma, rel=1e-6)


def test_invalid_lambda():
    with pytest.raises(ValueError):
        fit_sqrt_lasso(np.ones(3), np.ones((3, 1)), 0.0)


@pytest.mark.parametrize("c", [0.5, 3.0])
def test_sigma_scales_with_target(rng, c):
    others = rng.standard_normal((80, 5))
    target = others @ np.array([1.0, -0.5, 0.0, 0.0, 0.0]) + rng.standard_normal(80)
    opts = SolverOptions(tol=1e-12)
    base = fit_sqrt_lasso(target, others, 0.1, opts)
    scaled = fit_sqrt_lasso(c * target, others, 0.1, opts)
    assert scaled.sigma == pytest.approx(c * base.sigma, rel=1e-6)
    np.testing.assert_allclose(scaled.gamma, c * base.gamma, atol=1e-6 * c)

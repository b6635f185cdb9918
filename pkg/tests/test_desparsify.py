import numpy as np
import pytest

from desparsify import (
    desparsify,
    estimate_variance,
    oracle_theta,
    projected_variance,
    sigma_sq_huber,
    sigma_sq_lad,
    sigma_sq_quadratic,
    true_precision_scale,
)
from models.base import Dataset, ScoreMatrix
from models.errors import MissingPrecisionRowError, ZeroVarianceError
from models.losses import HuberLoss, LogisticLoss, QuadraticLoss, QuantileLoss
from models.scores import score_matrix
from nodewise import NoiseInfo, precision_estimate
from solvers import PenalizedFit, fit_lasso
from tests.helpers import make_data


def fitted(family='quadratic', spec=None, n=80, p=5, seed=0, lam=0.05):
    spec = spec or QuadraticLoss()
    data = make_data(family, n, p, seed=seed)
    fit = fit_lasso(spec, data, lam)
    rows = precision_estimate(spec, data, fit.coefficients, lambda_rule=0.05)
    return spec, data, fit, rows


def manual_fit(beta, intercept=None) -> PenalizedFit:
    beta = np.asarray(beta, dtype=float)
    return PenalizedFit(beta=beta, lam=0.1, objective=0.0, active_set=np.flatnonzero(beta),
                        kkt_residual=0.0, iterations=0, intercept=intercept)


def test_b_hat_is_beta_minus_correction():
    spec, data, fit, rows = fitted()
    for est in desparsify(spec, data, fit, rows):
        assert est.b_hat_j == est.beta_hat_j - est.correction_j
        assert est.beta_hat_j == fit.beta[est.j]
        assert est.sigma_hat_j > 0
        assert not est.oracle


def test_quadratic_one_step_form():
    spec, data, fit, rows = fitted(seed=1)
    resid = data.y - data.X @ fit.beta
    for row, est in zip(rows, desparsify(spec, data, fit, rows)):
        # 曲率权重下 Σ̂ = 2XᵀX/n，故 2Θ̂ⱼ 对应 (XᵀX/n)⁻¹ 的行
        expected = fit.beta[row.j] + 2.0 * row.theta_row @ data.X.T @ resid / data.n
        assert est.b_hat_j == pytest.approx(expected, abs=1e-12)


def test_constant_projection_variance():
    scores = ScoreMatrix(psi=np.array([[1.0], [-1.0], [1.0], [-1.0]]))
    assert projected_variance(np.array([3.0]), scores) == pytest.approx(9.0)


def test_zero_projection_raises():
    scores = ScoreMatrix(psi=np.array([[1.0, 0.0], [2.0, 0.0]]))
    with pytest.raises(ZeroVarianceError):
        projected_variance(np.array([0.0, 1.0]), scores)


def test_variance_matches_estimates():
    spec, data, fit, rows = fitted(seed=2)
    variances = estimate_variance(rows, score_matrix(spec, data, fit.coefficients))
    for est in desparsify(spec, data, fit, rows):
        assert est.sigma_hat_j ** 2 == pytest.approx(variances[est.j], rel=1e-12)


def test_sample_permutation_invariance(rng):
    spec, data, fit, rows = fitted('huber', HuberLoss(0.5), seed=3)
    perm = rng.permutation(data.n)
    shuffled = Dataset(data.X[perm], data.y[perm])
    base = desparsify(spec, data, fit, rows)
    moved = desparsify(spec, shuffled, fit, rows)
    for a, b in zip(base, moved):
        assert a.b_hat_j == pytest.approx(b.b_hat_j, abs=1e-12)
        assert a.sigma_hat_j == pytest.approx(b.sigma_hat_j, rel=1e-12)


def test_requested_columns_only():
    spec, data, fit, rows = fitted(seed=4)
    estimates = desparsify(spec, data, fit, rows, columns=[3, 1])
    assert [est.j for est in estimates] == [1, 3]


def test_missing_row():
    spec, data, fit, _ = fitted(seed=5)
    rows = precision_estimate(spec, data, fit.coefficients, columns=[0], lambda_rule=0.05)
    with pytest.raises(MissingPrecisionRowError):
        desparsify(spec, data, fit, rows, columns=[1])


def test_theta_override_marks_oracle():
    spec, data, fit, rows = fitted(seed=6)
    override = 0.5 * np.eye(data.p)
    by_matrix = desparsify(spec, data, fit, rows, theta_override=override)
    by_dict = desparsify(spec, data, fit, rows, columns=[2], theta_override={2: override[2]})
    assert all(est.oracle for est in by_matrix)
    assert by_dict[0].b_hat_j == pytest.approx(by_matrix[2].b_hat_j)


def test_standard_error_and_z_value():
    data = Dataset(np.ones((4, 1)), np.array([0.5, -0.5, 0.5, -0.5]))
    est = desparsify(QuadraticLoss(), data, manual_fit([0.0]), [], theta_override={0: np.array([2.0])})[0]
    # ψᵢ = −2yᵢ = ∓1，修正项为 0，σ̂² = 4
    assert est.b_hat_j == 0.0
    assert est.sigma_hat_j == pytest.approx(2.0)
    assert est.standard_error == pytest.approx(1.0)
    assert est.z_value == 0.0


def test_intercept_scores_are_centered():
    X = np.array([[1.0], [2.0], [3.0], [4.0]])
    data = Dataset(X, np.array([2.0, 2.0, 3.0, 3.0]))
    fit = manual_fit([0.0], intercept=2.5)
    est = desparsify(QuadraticLoss(), data, fit, [], theta_override={0: np.array([1.0])})[0]
    # 残差 (−0.5, −0.5, 0.5, 0.5)，中心化 x 为 (−1.5, −0.5, 0.5, 1.5)
    expected_correction = np.mean(-2 * np.array([-0.5, -0.5, 0.5, 0.5]) * np.array([-1.5, -0.5, 0.5, 1.5]))
    assert est.correction_j == pytest.approx(expected_correction)


def test_oracle_scales():
    gaussian = NoiseInfo.from_distribution('gaussian', huber_k=0.5)
    assert true_precision_scale(QuadraticLoss()) == 0.5
    assert true_precision_scale(QuantileLoss(0.5), gaussian) == pytest.approx(np.sqrt(2 * np.pi))
    assert true_precision_scale(HuberLoss(0.5), gaussian) == pytest.approx(0.5 / 0.382925, rel=1e-5)
    np.testing.assert_allclose(oracle_theta(QuadraticLoss(), np.eye(2)), 0.5 * np.eye(2))
    with pytest.raises(ValueError):
        true_precision_scale(LogisticLoss())


def test_closed_form_variances():
    assert sigma_sq_quadratic(2.0, 0.5) == 1.0
    # 高斯噪声下 LAD 的标准差尺度为 √(π/2) ≈ 1.2533
    assert np.sqrt(sigma_sq_lad(1.0, 1 / np.sqrt(2 * np.pi))) == pytest.approx(1.2533, abs=1e-4)
    wide = NoiseInfo.from_distribution('gaussian', huber_k=50.0)
    assert sigma_sq_huber(1.0, wide, 50.0) == pytest.approx(1.0, rel=1e-6)

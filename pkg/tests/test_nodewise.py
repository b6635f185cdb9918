import numpy as np
import pytest

from models.base import Coefficients, Dataset
from models.errors import DegenerateColumnError, MissingNoiseInfoError
from models.losses import HuberLoss, LogisticLoss, QuadraticLoss, QuantileLoss
from nodewise import (
    NoiseInfo,
    WeightedDesign,
    assemble_theta,
    build_weighted_design,
    correction_scale,
    default_weighting,
    extended_kkt_residual,
    loss_scale_correction,
    nodewise_row,
    precision_estimate,
    precision_rows,
    universal_lambda,
)


def unit_design(X: np.ndarray) -> WeightedDesign:
    return WeightedDesign(W_diag=np.ones(X.shape[0]), WX=X, weighting='unit')


def correlated_design(n: int, p: int, seed: int) -> np.ndarray:
    r = np.random.default_rng(seed)
    Z = r.standard_normal((n, p))
    return Z + 0.5 * np.roll(Z, 1, axis=1)


def test_orthogonal_columns_give_unit_rows(rng):
    n, p = 8, 3
    Q, _ = np.linalg.qr(rng.standard_normal((n, p)))
    wd = unit_design(np.sqrt(n) * Q)
    for j in range(p):
        row = nodewise_row(wd, j, 0.1)
        np.testing.assert_allclose(row.gamma, 0.0, atol=1e-12)
        assert row.tau_sq == pytest.approx(1.0)
        np.testing.assert_allclose(row.theta_row, np.eye(p)[j], atol=1e-12)


def test_single_column_design():
    X = np.array([[1.0], [2.0], [2.0]])
    rows = precision_rows(unit_design(X))
    assert len(rows) == 1
    assert rows[0].gamma.shape == (0,)
    assert rows[0].tau_sq == pytest.approx(3.0)
    np.testing.assert_allclose(rows[0].theta_row, [1.0 / 3.0])


@pytest.mark.parametrize("method", ['lasso', 'sqrt_lasso'])
def test_row_structure_and_extended_kkt(method):
    wd = unit_design(correlated_design(120, 8, seed=1))
    lam = 0.05 if method == 'lasso' else universal_lambda(wd.n, wd.p)
    for j in range(wd.p):
        row = nodewise_row(wd, j, lam, method)
        assert row.theta_row[j] * row.tau_sq == pytest.approx(1.0, rel=1e-15, abs=0)
        others = np.arange(wd.p) != j
        np.testing.assert_array_equal(row.theta_row[others], -row.gamma / row.tau_sq)
        assert extended_kkt_residual(wd, row) <= row.lambda_j / row.tau_sq + 1e-8


def test_dense_inverse_agreement():
    X = correlated_design(5000, 5, seed=2)
    wd = unit_design(X)
    rows = precision_rows(wd, lambda_rule=1e-6)
    theta = assemble_theta(rows, 5)
    expected = np.linalg.inv(X.T @ X / 5000)
    assert np.max(np.abs(theta - expected)) <= 1e-3


def test_diagonal_design_gives_inverse_diagonal(rng):
    n = 10
    Q, _ = np.linalg.qr(rng.standard_normal((n, 3)))
    X = np.sqrt(n) * Q * np.array([1.0, 2.0, 0.5])
    rows = precision_rows(unit_design(X), lambda_rule=0.01)
    np.testing.assert_allclose(assemble_theta(rows, 3), np.diag([1.0, 0.25, 4.0]), atol=1e-10)


def test_column_permutation_equivariance():
    X = correlated_design(100, 5, seed=3)
    perm = np.array([3, 0, 4, 1, 2])
    theta = assemble_theta(precision_rows(unit_design(X), lambda_rule=0.05), 5)
    permuted = assemble_theta(precision_rows(unit_design(X[:, perm]), lambda_rule=0.05), 5)
    np.testing.assert_allclose(permuted, theta[np.ix_(perm, perm)], atol=1e-8)


def test_only_requested_columns(rng):
    data = Dataset(rng.standard_normal((60, 4)), rng.standard_normal(60))
    rows = precision_estimate(QuadraticLoss(), data, Coefficients(np.zeros(4)), columns=[2])
    assert [row.j for row in rows] == [2]
    theta = assemble_theta(rows, 4)
    assert np.all(np.isnan(theta[[0, 1, 3]]))


def test_sqrt_method_uses_universal_lambda(rng):
    data = Dataset(rng.standard_normal((50, 4)), rng.standard_normal(50))
    rows = precision_estimate(QuadraticLoss(), data, Coefficients(np.zeros(4)), method='sqrt_lasso')
    assert all(row.method == 'sqrt_lasso' for row in rows)
    assert universal_lambda(50, 4, 1.0) == pytest.approx(np.sqrt(np.log(4) / 50))


def test_degenerate_column():
    X = np.column_stack([np.zeros(6), np.arange(6.0)])
    with pytest.raises(DegenerateColumnError) as info:
        nodewise_row(unit_design(X), 0, 0.1)
    assert info.value.j == 0


def test_weighted_design_cases(rng):
    X = rng.standard_normal((30, 3))
    data = Dataset(X, (rng.random(30) < 0.5).astype(float))
    zero = Coefficients(np.zeros(3))

    quad = build_weighted_design(QuadraticLoss(), data, zero)
    np.testing.assert_allclose(quad.W_diag, np.sqrt(2.0))
    np.testing.assert_allclose(quad.sigma_hat(), 2 * X.T @ X / 30)

    logit = build_weighted_design(LogisticLoss(), data, zero)
    np.testing.assert_allclose(logit.W_diag, 0.5)
    np.testing.assert_allclose(logit.sigma_hat(), X.T @ X / 120)

    quant = build_weighted_design(QuantileLoss(0.5), data, zero, default_weighting(QuantileLoss(0.5)))
    np.testing.assert_allclose(quant.sigma_hat(), X.T @ X / 30)


def test_intercept_centers_with_weights(rng):
    X = rng.standard_normal((40, 3)) + 2.0
    data = Dataset(X, (rng.random(40) < 0.5).astype(float))
    wd = build_weighted_design(LogisticLoss(), data, Coefficients(np.array([0.5, 0.0, -0.2]), 0.3))
    assert wd.centers is not None
    np.testing.assert_allclose(wd.W_diag @ wd.WX, 0.0, atol=1e-10)


def test_default_weighting():
    assert default_weighting(QuantileLoss(0.5)) == 'unit'
    assert default_weighting(HuberLoss(0.5), has_noise_info=True) == 'unit'
    assert default_weighting(HuberLoss(0.5)) == 'curvature'
    assert default_weighting(LogisticLoss()) == 'curvature'


def test_correction_scales_for_gaussian_noise():
    lad = NoiseInfo.from_distribution('gaussian', quantile_q=0.5)
    scale = correction_scale(QuantileLoss(0.5), lad)
    # 渐近标准差尺度 1/(2f(0)) = √(2π)/2
    assert scale / 2 == pytest.approx(np.sqrt(2 * np.pi) / 2, rel=1e-9)
    assert scale / 2 == pytest.approx(1.2533, abs=1e-4)

    huber = NoiseInfo.from_distribution('gaussian', huber_k=0.5)
    assert huber.mass_within_k == pytest.approx(0.38292, abs=1e-5)
    assert correction_scale(HuberLoss(0.5), huber, 'unit') == pytest.approx(1.3057, abs=1e-3)
    assert correction_scale(HuberLoss(0.5), huber, 'curvature') == 1.0


def test_scaled_t_noise_constants():
    info = NoiseInfo.from_distribution('t3', huber_k=0.5)
    assert 0 < info.mass_within_k < 1
    assert info.second_moment_within_k < 0.25 * info.mass_within_k


def test_correction_errors():
    with pytest.raises(MissingNoiseInfoError):
        correction_scale(QuantileLoss(0.5), None)
    with pytest.raises(MissingNoiseInfoError):
        correction_scale(HuberLoss(0.5), NoiseInfo(density=0.4), 'unit')
    with pytest.raises(ValueError):
        correction_scale(QuantileLoss(0.5), NoiseInfo(density=0.0))
    mismatched = NoiseInfo.from_distribution('gaussian', huber_k=1.0)
    with pytest.raises(ValueError):
        correction_scale(HuberLoss(0.5), mismatched, 'unit')


def test_quadratic_correction_is_identity():
    wd = unit_design(correlated_design(50, 3, seed=4))
    rows = precision_rows(wd, lambda_rule=0.05)
    corrected = loss_scale_correction(QuadraticLoss(), rows)
    for before, after in zip(rows, corrected):
        np.testing.assert_array_equal(before.theta_row, after.theta_row)
        assert after.scale == 1.0


def test_corrected_rows_keep_uncorrected_theta():
    wd = unit_design(correlated_design(50, 3, seed=5))
    rows = precision_rows(wd, lambda_rule=0.05)
    noise = NoiseInfo.from_distribution('gaussian')
    corrected = loss_scale_correction(QuantileLoss(0.5), rows, noise)
    for before, after in zip(rows, corrected):
        np.testing.assert_allclose(after.theta_row, before.theta_row / noise.density)
        np.testing.assert_allclose(after.theta_prime, before.theta_row)


def test_kde_noise_estimate(rng):
    info = NoiseInfo.estimate(rng.standard_normal(4000), huber_k=0.5)
    assert info.source == "kde"
    assert info.density == pytest.approx(1 / np.sqrt(2 * np.pi), abs=0.03)
    assert info.mass_within_k == pytest.approx(0.3829, abs=0.04)

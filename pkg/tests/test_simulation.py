import numpy as np
import pandas as pd
import pytest

from models.losses import HuberLoss, LogisticLoss, QuadraticLoss, QuantileLoss
from pipeline.runner import PipelineOptions
from simulation import (
    DIAGNOSTIC_COLUMNS,
    RECORD_COLUMNS,
    Z_COLUMNS,
    DgpConfig,
    ExperimentResult,
    draw_errors,
    export_standardized,
    generate,
    make_rng,
    noise_for,
    pooled_ks,
    run_ci_experiment,
    run_fwer_experiment,
)

FAST = PipelineOptions(lam=0.1, nodewise_lambda=0.05)


def test_two_by_two_covariance():
    cfg = DgpConfig(n=10, p=2, s0=1)
    expected = np.array([[1.0, -0.3], [-0.3, 1.0]]) / 0.91
    np.testing.assert_allclose(cfg.sigma0, expected)
    np.testing.assert_allclose(cfg.beta0, [1.0, 0.0])


def test_sample_covariance_matches():
    cfg = DgpConfig(n=100000, p=5, seed=1)
    data, truth = generate(cfg)
    np.testing.assert_allclose(np.cov(data.X.T), cfg.sigma0, atol=0.025)
    np.testing.assert_allclose(truth.beta, [1, 1, 1, 0, 0])


@pytest.mark.parametrize("law", ['gaussian', 't5'])
def test_errors_have_unit_variance(law):
    draws = draw_errors(law, 200000, make_rng(3))
    assert np.var(draws) == pytest.approx(1.0, rel=0.05)


def test_heavy_tailed_errors_are_scaled():
    draws = draw_errors('t3', 200000, make_rng(4))
    # t₃·√(1/3) 的四分位距为 2·0.7649·√(1/3) ≈ 0.8832
    iqr = np.subtract(*np.quantile(draws, [0.75, 0.25]))
    assert iqr == pytest.approx(0.8832, abs=0.02)


def test_generation_is_deterministic():
    cfg = DgpConfig(n=50, p=4, seed=11)
    first, _ = generate(cfg, replication=3)
    second, _ = generate(cfg, replication=3)
    other, _ = generate(cfg, replication=4)
    np.testing.assert_array_equal(first.X, second.X)
    np.testing.assert_array_equal(first.y, second.y)
    assert not np.array_equal(first.X, other.X)


def test_logistic_responses_are_binary():
    data, _ = generate(DgpConfig(n=300, p=4, error_dist='logistic_bernoulli'))
    assert set(np.unique(data.y)) <= {0.0, 1.0}


@pytest.mark.parametrize("kwargs", [
    {'n': 10, 'p': 3, 's0': 4},
    {'n': 0, 'p': 3},
    {'n': 10, 'p': 3, 'error_dist': 'cauchy'},
    {'n': 10, 'p': 3, 'off_diagonal': 0.8},
])
def test_invalid_configs(kwargs):
    with pytest.raises((ValueError, np.linalg.LinAlgError)):
        DgpConfig(**kwargs)


def test_noise_constants_follow_law():
    cfg = DgpConfig(n=10, p=3, error_dist='t3')
    assert noise_for(cfg, QuadraticLoss()) is None
    assert noise_for(cfg, HuberLoss(0.5)).huber_k == 0.5
    assert noise_for(cfg, QuantileLoss(0.5)).source == 't3'
    assert noise_for(DgpConfig(n=10, p=3, error_dist='logistic_bernoulli'), LogisticLoss()) is None


def test_single_replication_smoke():
    result = run_ci_experiment(DgpConfig(n=200, p=2, s0=1, seed=5), QuadraticLoss(), reps=1)
    assert result.n_failed == 0
    assert list(result.records.columns) == RECORD_COLUMNS
    agg = result.aggregates()
    assert agg['coverage_S0'] in (0.0, 1.0)
    assert agg['coverage_S0c'] in (0.0, 1.0)
    assert agg['count_S0'] == 1 and agg['count_S0c'] == 1
    assert agg['length_S0'] > 0
    diagnostics = result.diagnostics
    assert list(diagnostics.columns) == DIAGNOSTIC_COLUMNS
    assert len(diagnostics) == 1
    assert (diagnostics['kkt_residual'] <= diagnostics['kkt_bound']).all()
    assert (diagnostics['tau_identity_error'] <= 1e-12).all()


def test_replications_do_not_depend_on_workers():
    cfg = DgpConfig(n=80, p=3, s0=1, seed=9)
    serial = run_ci_experiment(cfg, HuberLoss(0.5), reps=3, options=FAST, n_jobs=1)
    parallel = run_ci_experiment(cfg, HuberLoss(0.5), reps=3, options=FAST, n_jobs=2)
    pd.testing.assert_frame_equal(serial.records, parallel.records)


def test_oracle_and_mle_records():
    cfg = DgpConfig(n=120, p=3, s0=1, seed=2)
    result = run_ci_experiment(cfg, QuadraticLoss(), reps=2, options=FAST, compare_mle=True, oracle=True)
    assert result.methods == ['desparsified', 'mle']
    ours = result.records[result.records['method'] == 'desparsified']
    assert ours['b_tilde'].notna().all()
    assert result.aggregates('mle')['count_S0'] == 2
    assert set(result.to_dict()['aggregates']) == {'desparsified', 'mle'}


def test_mle_comparison_needs_likelihood_family():
    with pytest.raises(ValueError):
        run_ci_experiment(DgpConfig(n=50, p=2), HuberLoss(0.5), reps=1, compare_mle=True)
    with pytest.raises(ValueError):
        run_ci_experiment(DgpConfig(n=50, p=2), QuadraticLoss(), reps=0)


def test_fwer_smoke():
    result = run_fwer_experiment(DgpConfig(n=150, p=4, s0=2, seed=3), QuadraticLoss(), reps=1, options=FAST)
    assert result.fwer in (0.0, 1.0)
    assert 0.0 <= result.tpr <= 1.0
    assert len(result.replications) == 1


def test_empty_support_gives_undefined_tpr():
    result = run_fwer_experiment(DgpConfig(n=100, p=3, s0=0, seed=4), QuadraticLoss(), reps=2, options=FAST)
    assert np.isnan(result.tpr)
    assert not result.tpr_defined
    assert 0.0 <= result.fwer <= 1.0


def test_export_standardized():
    result = run_ci_experiment(DgpConfig(n=100, p=3, s0=1, seed=6), QuadraticLoss(), reps=3, options=FAST)
    table = export_standardized(result)
    assert list(table.columns) == Z_COLUMNS
    assert len(table) == 9
    ours = result.records[result.records['method'] == 'desparsified'].sort_values(['j', 'replication'])
    np.testing.assert_allclose(table['z'], ours['z'])
    assert (table['ks_statistic'] >= 0).all()


def test_export_of_empty_result():
    empty = ExperimentResult(config={'n': 10}, loss={}, alpha=0.05, n_reps=0,
                             records=pd.DataFrame(columns=RECORD_COLUMNS))
    table = export_standardized(empty)
    assert table.empty
    assert list(table.columns) == Z_COLUMNS


def test_pooled_ks_on_normal_draws():
    z = make_rng(8).standard_normal(400)
    table = pd.DataFrame({'j': np.repeat([0, 1], 200), 'z': z})
    assert pooled_ks(table).statistic < 1.63 / np.sqrt(400)


@pytest.fixture(scope="module")
def gaussian_run():
    cfg = DgpConfig(n=500, p=100, s0=3, error_dist='gaussian', seed=7)
    return run_ci_experiment(cfg, QuadraticLoss(), reps=100, n_jobs=-1)


def assert_diagnostics_hold(frame):
    assert len(frame) > 0
    assert (frame['kkt_residual'] <= frame['kkt_bound']).all()
    assert (frame['nodewise_excess'] <= 1e-8).all()
    assert (frame['tau_identity_error'] <= 1e-12).all()


@pytest.mark.slow
def test_gaussian_coverage_acceptance(gaussian_run):
    result = gaussian_run
    agg = result.aggregates()
    assert result.n_failed == 0
    assert abs(agg['coverage_S0'] - 0.9267) <= 0.04
    assert abs(agg['coverage_S0c'] - 0.9588) <= 0.02
    assert abs(agg['length_S0'] - 0.17) <= 0.03


@pytest.mark.slow
def test_logistic_fwer_acceptance():
    cfg = DgpConfig(n=400, p=100, s0=3, error_dist='logistic_bernoulli', seed=7)
    result = run_fwer_experiment(cfg, LogisticLoss(), reps=200, adjust='holm', n_jobs=-1)
    assert result.tpr >= 0.95
    assert result.fwer <= 0.05
    assert_diagnostics_hold(result.replications)


@pytest.mark.slow
def test_gaussian_standardized_statistics_look_normal(gaussian_run):
    table = export_standardized(gaussian_run)
    assert pooled_ks(table, columns=range(4)).pvalue > 0.01


@pytest.mark.slow
def test_gaussian_variance_estimate_matches_spread(gaussian_run):
    ratio = gaussian_run.variance_ratio()
    for j in range(3):
        assert abs(ratio[j] - 1.0) <= 0.15


@pytest.mark.slow
def test_gaussian_fits_satisfy_optimality(gaussian_run):
    assert len(gaussian_run.diagnostics) == gaussian_run.n_reps - gaussian_run.n_failed
    assert_diagnostics_hold(gaussian_run.diagnostics)


@pytest.mark.slow
def test_huber_heavy_tail_acceptance():
    cfg = DgpConfig(n=500, p=100, s0=3, error_dist='t3', seed=7)
    result = run_ci_experiment(cfg, HuberLoss(0.5), reps=100, n_jobs=-1)
    agg = result.aggregates()
    assert result.n_failed == 0
    assert abs(agg['coverage_S0'] - 0.9467) <= 0.04
    assert abs(agg['length_S0'] - 0.11) <= 0.03
    assert_diagnostics_hold(result.diagnostics)


@pytest.mark.slow
def test_logistic_coverage_acceptance():
    cfg = DgpConfig(n=400, p=100, s0=3, error_dist='logistic_bernoulli', seed=7)
    result = run_ci_experiment(cfg, LogisticLoss(), reps=100, n_jobs=-1)
    agg = result.aggregates()
    assert result.n_failed == 0
    assert abs(agg['coverage_S0'] - 0.817) <= 0.06
    assert abs(agg['coverage_S0c'] - 0.919) <= 0.03
    assert_diagnostics_hold(result.diagnostics)

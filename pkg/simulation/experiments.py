"""蒙特卡洛实验：置信区间覆盖率/长度与多重检验的 FWER/TPR

每次重复拥有独立的随机数流并在单线程 BLAS 下运行，
因此结果与并行工作进程数无关。
"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import statsmodels.api as sm
from joblib import Parallel, delayed
from threadpoolctl import threadpool_limits

from config.settings import Settings
from desparsify.oracles import oracle_theta
from inference.intervals import confidence_interval, p_value, z_quantile
from models.errors import DesparsifyError
from models.losses import LossSpec
from nodewise.correction import NoiseInfo
from nodewise.regression import extended_kkt_residual
from pipeline.runner import InferencePipeline, PipelineOptions, PipelineResult
from solvers.kkt import kkt_check, quantile_kkt_bound
from simulation.dgp import STREAM_CV_INITIAL, STREAM_CV_NODEWISE, DgpConfig, derive_seed, generate
from utils.helpers import log, progress

RECORD_COLUMNS = [
    'replication', 'method', 'j', 'in_support', 'beta0', 'beta_hat', 'b_hat', 'sigma_hat',
    'ci_lo', 'ci_hi', 'covered', 'length', 'z', 'p_value', 'b_tilde'
]

DIAGNOSTIC_COLUMNS = ['replication', 'kkt_residual', 'kkt_bound', 'nodewise_excess', 'tau_identity_error']

# 光滑损失的 KKT 残差容许值
SMOOTH_KKT_TOL = 1e-6


def noise_for(cfg: DgpConfig, spec: LossSpec) -> Optional[NoiseInfo]:
    """模拟中使用真实噪声常数"""
    if cfg.is_logistic or spec.family not in ('quantile', 'huber'):
        return None
    return NoiseInfo.from_distribution(cfg.error_dist, huber_k=getattr(spec, 'K', None),
                                       quantile_q=getattr(spec, 'q', 0.5))


def replication_options(cfg: DgpConfig, spec: LossSpec, base: PipelineOptions,
                        replication: int, oracle: bool) -> PipelineOptions:
    """为第 r 次重复派生流程选项：独立的折划分种子、真实噪声常数、单进程"""
    noise = base.noise if base.noise is not None else noise_for(cfg, spec)
    theta = None
    if oracle and not cfg.is_logistic:
        theta = oracle_theta(spec, cfg.theta0, noise)
    return replace(
        base,
        noise=noise,
        cv_seed=derive_seed(cfg.seed, replication, STREAM_CV_INITIAL),
        nodewise_seed=derive_seed(cfg.seed, replication, STREAM_CV_NODEWISE),
        oracle_theta=theta,
        n_jobs=1
    )


def fit_diagnostics(spec: LossSpec, data, result: PipelineResult, replication: int) -> dict:
    """
    一次重复的数值诊断

    kkt_residual 与 kkt_bound：光滑损失为 KKT 残差与 1e-6，分位数损失为 ‖Pₙψ‖∞ 与 λ + ŝ·K_X/n + 1e-6。
    nodewise_excess：各行 ‖Σ̂Θ̂′ⱼ − eⱼ‖∞ − λⱼ/τ̂ⱼ² 的最大值。
    tau_identity_error：各行 |Θ̂′ⱼ[j]·τ̂ⱼ² − 1| 的最大值。
    """
    fit = result.fit
    if spec.family == 'quantile':
        residual, bound = kkt_check(spec, data, fit), quantile_kkt_bound(data, fit)
    else:
        residual, bound = fit.kkt_residual, SMOOTH_KKT_TOL
    excess = max(extended_kkt_residual(result.design, row) - row.lambda_j / row.tau_sq for row in result.rows)
    identity = max(abs(row.theta_prime[row.j] * row.tau_sq - 1.0) for row in result.rows)
    return {
        'replication': replication, 'kkt_residual': float(residual), 'kkt_bound': float(bound),
        'nodewise_excess': float(excess), 'tau_identity_error': float(identity)
    }


def _mle_records(data, truth: np.ndarray, spec: LossSpec, alpha: float, replication: int) -> List[dict]:
    """未惩罚极大似然拟合的 Wald 区间（logistic 用 Logit，平方损失用 OLS）"""
    model = sm.Logit(data.y, data.X) if spec.family == 'logistic' else sm.OLS(data.y, data.X)
    res = model.fit(disp=0) if spec.family == 'logistic' else model.fit()
    ci = np.asarray(res.conf_int(alpha))
    params, bse, pvals = np.asarray(res.params), np.asarray(res.bse), np.asarray(res.pvalues)
    records = []
    for j in range(data.p):
        records.append({
            'replication': replication, 'method': 'mle', 'j': j,
            'in_support': bool(truth[j] != 0), 'beta0': float(truth[j]),
            'beta_hat': float(params[j]), 'b_hat': float(params[j]),
            'sigma_hat': float(bse[j] * np.sqrt(data.n)),
            'ci_lo': float(ci[j, 0]), 'ci_hi': float(ci[j, 1]),
            'covered': bool(ci[j, 0] <= truth[j] <= ci[j, 1]),
            'length': float(ci[j, 1] - ci[j, 0]),
            'z': float((params[j] - truth[j]) / bse[j]),
            'p_value': float(pvals[j]), 'b_tilde': float('nan')
        })
    return records


def _replicate(cfg: DgpConfig, spec: LossSpec, base: PipelineOptions, replication: int,
               alpha: float, compare_mle: bool, oracle: bool) -> Tuple[List[dict], Optional[dict], Optional[str]]:
    with threadpool_limits(limits=1):
        data, truth = generate(cfg, replication)
        options = replication_options(cfg, spec, base, replication, oracle)
        try:
            result = InferencePipeline(spec, options).run(data)
        except DesparsifyError as e:
            return [], None, f"第 {replication} 次重复失败: {e}"

        tilde = {est.j: est.b_hat_j for est in result.oracle_estimates}
        beta0 = truth.beta
        records = []
        for est in result.estimates:
            lo, hi = confidence_interval(est, alpha)
            records.append({
                'replication': replication, 'method': 'desparsified', 'j': est.j,
                'in_support': bool(beta0[est.j] != 0), 'beta0': float(beta0[est.j]),
                'beta_hat': est.beta_hat_j, 'b_hat': est.b_hat_j, 'sigma_hat': est.sigma_hat_j,
                'ci_lo': lo, 'ci_hi': hi, 'covered': bool(lo <= beta0[est.j] <= hi),
                'length': hi - lo, 'z': (est.b_hat_j - beta0[est.j]) / est.standard_error,
                'p_value': p_value(est), 'b_tilde': tilde.get(est.j, float('nan'))
            })
        if compare_mle:
            try:
                records.extend(_mle_records(data, beta0, spec, alpha, replication))
            except Exception as e:
                log(f"第 {replication} 次重复的极大似然拟合失败: {e}", "WARN", "run_ci_experiment")
        return records, fit_diagnostics(spec, data, result, replication), None


@dataclass
class ExperimentResult:
    """覆盖率实验结果"""

    config: dict
    loss: dict
    alpha: float
    n_reps: int
    records: pd.DataFrame
    n_failed: int = 0
    failures: List[str] = field(default_factory=list)
    diagnostics: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=DIAGNOSTIC_COLUMNS))

    def _frame(self, method: str) -> pd.DataFrame:
        return self.records[self.records['method'] == method]

    @property
    def methods(self) -> List[str]:
        return list(dict.fromkeys(self.records['method'])) if len(self.records) else []

    def aggregates(self, method: str = 'desparsified') -> Dict[str, float]:
        """S₀ 与 S₀ᶜ 上的平均覆盖率与平均区间长度"""
        frame = self._frame(method)
        support, rest = frame[frame['in_support']], frame[~frame['in_support']]

        def mean(series):
            return float(series.mean()) if len(series) else float('nan')

        return {
            'coverage_S0': mean(support['covered']),
            'coverage_S0c': mean(rest['covered']),
            'length_S0': mean(support['length']),
            'length_S0c': mean(rest['length']),
            'count_S0': int(len(support)),
            'count_S0c': int(len(rest))
        }

    def oracle_coverage(self, method: str = 'desparsified') -> Dict[str, float]:
        """用重复间 b̂ⱼ 的经验标准差代替 σ̂ⱼ/√n 的已知方差覆盖率"""
        frame = self._frame(method)
        if frame.empty:
            return {'coverage_S0': float('nan'), 'coverage_S0c': float('nan')}
        z = z_quantile(self.alpha)
        sd = frame.groupby('j')['b_hat'].transform(lambda s: s.std(ddof=1))
        covered = (frame['b_hat'] - frame['beta0']).abs() <= z * sd
        support = frame['in_support']
        return {
            'coverage_S0': float(covered[support].mean()) if support.any() else float('nan'),
            'coverage_S0c': float(covered[~support].mean()) if (~support).any() else float('nan')
        }

    def variance_ratio(self, method: str = 'desparsified') -> pd.Series:
        """每个 j：mean(σ̂ⱼ/√n) / sd(b̂ⱼ)"""
        frame = self._frame(method)
        n = self.config['n']
        grouped = frame.groupby('j')
        return grouped['sigma_hat'].mean() / np.sqrt(n) / grouped['b_hat'].std(ddof=1)

    def to_dict(self) -> dict:
        return {
            'config': self.config,
            'loss': self.loss,
            'alpha': self.alpha,
            'n_reps': self.n_reps,
            'n_failed': self.n_failed,
            'failures': self.failures,
            'aggregates': {m: self.aggregates(m) for m in self.methods},
            'oracle_coverage': self.oracle_coverage()
        }


def run_ci_experiment(
    cfg: DgpConfig,
    spec: LossSpec,
    reps: int,
    options: Optional[PipelineOptions] = None,
    alpha: Optional[float] = None,
    compare_mle: bool = False,
    oracle: bool = False,
    n_jobs: int = 1
) -> ExperimentResult:
    """
    覆盖率/长度实验

    Args:
        cfg: 数据生成配置
        spec: 损失族
        reps: 重复次数 N ≥ 1
        options: 流程选项模板（每次重复派生种子与噪声常数）
        alpha: 显著性水平，默认 Settings.ALPHA
        compare_mle: 同时记录未惩罚极大似然的 Wald 区间
        oracle: 同时记录以真实 Θ 计算的 b̃ⱼ（logistic 不支持）
        n_jobs: 并行重复数

    Returns:
        ExperimentResult
    """
    if reps < 1:
        raise ValueError(f"重复次数至少为 1，实际 {reps}")
    if compare_mle and spec.family not in ('logistic', 'quadratic'):
        raise ValueError(f"极大似然对照只支持 logistic 与平方损失，实际 {spec.family}")
    alpha = Settings.ALPHA if alpha is None else alpha
    options = options or PipelineOptions()
    log(f"覆盖率实验：{spec}，n={cfg.n}，p={cfg.p}，误差 {cfg.error_dist}，N={reps}", "INFO", "run_ci_experiment")

    outputs = Parallel(n_jobs=n_jobs)(
        delayed(_replicate)(cfg, spec, options, r, alpha, compare_mle, oracle) for r in range(reps)
    )

    records, diagnostics, failures = [], [], []
    for r, (rows, diag, failure) in enumerate(outputs, 1):
        progress(r, reps, "次重复")
        records.extend(rows)
        if diag is not None:
            diagnostics.append(diag)
        if failure:
            log(failure, "WARN", "run_ci_experiment")
            failures.append(failure)

    frame = pd.DataFrame(records, columns=RECORD_COLUMNS)
    frame = frame.sort_values(['method', 'replication', 'j'], kind='stable').reset_index(drop=True)
    return ExperimentResult(
        config=cfg.to_dict(),
        loss=spec.to_dict(),
        alpha=alpha,
        n_reps=reps,
        records=frame,
        n_failed=len(failures),
        failures=failures,
        diagnostics=pd.DataFrame(diagnostics, columns=DIAGNOSTIC_COLUMNS)
    )


@dataclass
class FwerResult:
    """多重检验实验结果"""

    tpr: float
    fwer: float
    fdr: float
    all_rejected_rate: float
    tpr_defined: bool
    n_reps: int
    adjust: str
    alpha: float
    replications: pd.DataFrame
    n_failed: int = 0

    def as_tuple(self) -> Tuple[float, float]:
        return self.tpr, self.fwer

    def to_dict(self) -> dict:
        return {
            'tpr': self.tpr,
            'fwer': self.fwer,
            'fdr': self.fdr,
            'all_rejected_rate': self.all_rejected_rate,
            'tpr_defined': self.tpr_defined,
            'n_reps': self.n_reps,
            'n_failed': self.n_failed,
            'adjust': self.adjust,
            'alpha': self.alpha
        }


def _test_replicate(cfg: DgpConfig, spec: LossSpec, base: PipelineOptions, replication: int,
                    alpha: float, adjust: str) -> Optional[dict]:
    with threadpool_limits(limits=1):
        data, truth = generate(cfg, replication)
        options = replication_options(cfg, spec, base, replication, oracle=False)
        try:
            result, report = InferencePipeline(spec, options).infer(data, alpha, adjust)
        except DesparsifyError as e:
            log(f"第 {replication} 次重复失败: {e}", "WARN", "run_fwer_experiment")
            return None
        rejected = set(report.rejected())
        support = set(np.flatnonzero(truth.beta).tolist())
        false = rejected - support
        return {
            'replication': replication,
            'n_rejected': len(rejected),
            'true_rejections': len(rejected & support),
            'false_rejections': len(false),
            'all_support_rejected': support <= rejected,
            'any_false': bool(false),
            **fit_diagnostics(spec, data, result, replication)
        }


def run_fwer_experiment(
    cfg: DgpConfig,
    spec: LossSpec,
    reps: int,
    options: Optional[PipelineOptions] = None,
    alpha: Optional[float] = None,
    adjust: str = 'holm',
    n_jobs: int = 1
) -> FwerResult:
    """
    多重检验实验：每次重复做完整流程后按 adjust 校正，记录 S₀ 的拒绝情况与 S₀ᶜ 的误拒

    Returns:
        FwerResult；S₀ 为空时 tpr 为 NaN 且 tpr_defined 为 False
    """
    if reps < 1:
        raise ValueError(f"重复次数至少为 1，实际 {reps}")
    alpha = Settings.ALPHA if alpha is None else alpha
    options = options or PipelineOptions()
    outputs = Parallel(n_jobs=n_jobs)(
        delayed(_test_replicate)(cfg, spec, options, r, alpha, adjust) for r in range(reps)
    )
    rows = [row for row in outputs if row is not None]
    frame = pd.DataFrame(rows, columns=['replication', 'n_rejected', 'true_rejections', 'false_rejections',
                                        'all_support_rejected', 'any_false'] + DIAGNOSTIC_COLUMNS[1:])
    s0 = cfg.s0
    tpr_defined = s0 > 0
    if not tpr_defined:
        log("真实支撑集为空，TPR 无定义", "WARN", "run_fwer_experiment")
    done = len(frame)

    def rate(values):
        return float(np.mean(values)) if done else float('nan')

    tpr = float(frame['true_rejections'].sum() / (done * s0)) if tpr_defined and done else float('nan')
    fdp = frame['false_rejections'] / frame['n_rejected'].clip(lower=1)
    return FwerResult(
        tpr=tpr,
        fwer=rate(frame['any_false']),
        fdr=rate(fdp),
        all_rejected_rate=rate(frame['all_support_rejected']) if tpr_defined else float('nan'),
        tpr_defined=tpr_defined,
        n_reps=reps,
        adjust=adjust,
        alpha=alpha,
        replications=frame,
        n_failed=reps - done
    )

"""去稀疏化推断流程编排

初始惩罚拟合（λ 由交叉验证或给定）→ 节点回归 → 标量修正 → 去稀疏化 → 推断报告。
模拟与命令行共用这一流程。
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from config.settings import Settings
from desparsify.estimator import DesparsifiedEstimate, desparsify
from inference.report import InferenceReport, build_report
from models.base import Dataset
from models.errors import MissingNoiseInfoError
from models.losses import LossSpec
from nodewise.correction import NoiseInfo, loss_scale_correction
from nodewise.regression import PrecisionRow, precision_rows
from nodewise.weights import WeightedDesign, build_weighted_design, default_weighting
from solvers.base import LambdaPath, PenalizedFit, SolverOptions
from solvers.cross_validation import cv_select_lambda
from solvers.lasso import fit_lasso
from utils.helpers import log


@dataclass
class PipelineOptions:
    """流程选项"""

    lam: Optional[float] = None
    nodewise_method: str = 'lasso'
    nodewise_lambda: Optional[Union[str, float]] = None
    sqrt_c: float = field(default_factory=lambda: Settings.SQRT_C)
    columns: Optional[Sequence[int]] = None
    noise: Optional[NoiseInfo] = None
    estimate_noise: bool = False
    weighting: Optional[str] = None
    solver: SolverOptions = field(default_factory=SolverOptions)
    n_folds: int = field(default_factory=lambda: Settings.FOLDS)
    path_len: int = field(default_factory=lambda: Settings.PATH_LEN)
    path_ratio: float = field(default_factory=lambda: Settings.PATH_RATIO)
    cv_seed: int = field(default_factory=lambda: Settings.SEED)
    nodewise_seed: int = field(default_factory=lambda: Settings.SEED)
    oracle_theta: Optional[np.ndarray] = None
    n_jobs: int = 1

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "nodewise_method": self.nodewise_method,
            "nodewise_lambda": self.nodewise_lambda,
            "sqrt_c": self.sqrt_c,
            "columns": None if self.columns is None else [int(j) for j in self.columns],
            "noise": None if self.noise is None else self.noise.to_dict(),
            "estimate_noise": self.estimate_noise,
            "weighting": self.weighting,
            "solver": self.solver.to_dict(),
            "n_folds": self.n_folds,
            "path_len": self.path_len,
            "path_ratio": self.path_ratio,
            "cv_seed": self.cv_seed,
            "nodewise_seed": self.nodewise_seed,
            "oracle_theta": self.oracle_theta is not None
        }


@dataclass
class PipelineResult:
    """一次完整流程的中间结果与输出"""

    fit: PenalizedFit
    path: Optional[LambdaPath]
    design: WeightedDesign
    rows: List[PrecisionRow]
    estimates: List[DesparsifiedEstimate]
    noise: Optional[NoiseInfo] = None
    oracle_estimates: List[DesparsifiedEstimate] = field(default_factory=list)


class InferencePipeline:
    """去稀疏化推断流程"""

    def __init__(self, spec: LossSpec, options: Optional[PipelineOptions] = None):
        """
        初始化流程

        Args:
            spec: 损失族
            options: 流程选项
        """
        self.spec = spec
        self.options = options or PipelineOptions()

    def fit_initial(self, data: Dataset) -> tuple:
        """
        初始 ℓ1 惩罚估计

        Returns:
            (PenalizedFit, LambdaPath 或 None)
        """
        opts = self.options
        path = None
        lam = opts.lam
        if lam is None:
            path = cv_select_lambda(
                self.spec, data, n_folds=opts.n_folds, path_len=opts.path_len,
                ratio=opts.path_ratio, seed=opts.cv_seed, opts=opts.solver, n_jobs=opts.n_jobs
            )
            lam = path.selected_lambda
            self._log(f"交叉验证选择 λ = {lam:.4g}（路径第 {path.selected + 1}/{len(path.values)} 个）")
        fit = fit_lasso(self.spec, data, lam, opts.solver)
        self._log(f"初始估计：{fit}")
        return fit, path

    def resolve_noise(self, data: Dataset, fit: PenalizedFit) -> Optional[NoiseInfo]:
        """确定标量修正所需的噪声常数：给定值优先，其次按需做核密度估计"""
        opts = self.options
        if opts.noise is not None or self.spec.family not in ('quantile', 'huber'):
            return opts.noise
        if opts.estimate_noise:
            residuals = data.y - fit.coefficients.linear_predictor(data.X)
            return NoiseInfo.estimate(residuals, huber_k=getattr(self.spec, 'K', None),
                                      quantile_q=getattr(self.spec, 'q', 0.5))
        if self.spec.family == 'quantile':
            raise MissingNoiseInfoError("分位数损失需要噪声密度：请提供噪声常数或启用核密度估计")
        return None

    def estimate_precision(self, data: Dataset, fit: PenalizedFit, noise: Optional[NoiseInfo]):
        """
        节点回归并施加标量修正

        Returns:
            (WeightedDesign, 修正后的 PrecisionRow 列表)
        """
        opts = self.options
        weighting = opts.weighting or default_weighting(self.spec, noise is not None)
        design = build_weighted_design(self.spec, data, fit.coefficients, weighting)
        rows = precision_rows(
            design, opts.columns, opts.nodewise_lambda, opts.nodewise_method,
            opts.sqrt_c, opts.nodewise_seed, opts.solver, opts.n_jobs
        )
        self._log(f"节点回归完成：{len(rows)} 列（{opts.nodewise_method}，{design.weighting} 权重）")
        return design, loss_scale_correction(self.spec, rows, noise)

    def run(self, data: Dataset) -> PipelineResult:
        """
        运行完整流程

        Args:
            data: 数据集

        Returns:
            PipelineResult
        """
        data.validate_for(self.spec)
        fit, path = self.fit_initial(data)
        noise = self.resolve_noise(data, fit)
        design, rows = self.estimate_precision(data, fit, noise)
        estimates = desparsify(self.spec, data, fit, rows, centers=design.centers)

        oracle_estimates = []
        if self.options.oracle_theta is not None:
            oracle_estimates = desparsify(
                self.spec, data, fit, rows, columns=[row.j for row in rows],
                theta_override=self.options.oracle_theta, centers=design.centers
            )
        return PipelineResult(fit, path, design, rows, estimates, noise, oracle_estimates)

    def infer(
        self,
        data: Dataset,
        alpha: Optional[float] = None,
        adjust: str = 'holm',
        p_total: Optional[int] = None
    ) -> tuple:
        """
        运行流程并生成推断报告

        Returns:
            (PipelineResult, InferenceReport)
        """
        alpha = Settings.ALPHA if alpha is None else alpha
        result = self.run(data)
        report = build_report(result.estimates, alpha, adjust, p_total or data.p, data.feature_names)
        report.metadata = {
            "loss": self.spec.to_dict(),
            "lambda": result.fit.lam,
            "s_hat": result.fit.sparsity,
            "pipeline": self.options.to_dict()
        }
        return result, report

    def _log(self, message: str, level: str = "INFO") -> None:
        log(message, level, self.__class__.__name__)

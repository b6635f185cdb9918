"""节点回归估计精度矩阵的行

对每个请求的列 j，把 ŴXⱼ 对 ŴX₋ⱼ 做惩罚回归：
    γ̂ⱼ = argmin ‖ŴXⱼ − ŴX₋ⱼγ‖²/n + 2λⱼ‖γ‖₁
    τ̂ⱼ² = ‖ŴXⱼ − ŴX₋ⱼγ̂ⱼ‖²/n + λⱼ‖γ̂ⱼ‖₁
    Θ̂ⱼ = (−γ̂ⱼ,₁, …, 1, …, −γ̂ⱼ,ₚ₋₁)/τ̂ⱼ²
KKT 条件给出 ‖Σ̂Θ̂ⱼ − eⱼ‖∞ ≤ λⱼ/τ̂ⱼ²。
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np
from joblib import Parallel, delayed

from config.settings import Settings
from models.base import Coefficients, Dataset
from models.errors import DegenerateColumnError
from models.losses import LossSpec, QuadraticLoss
from nodewise.weights import WeightedDesign, build_weighted_design
from solvers.base import SolverOptions
from solvers.coordinate_descent import solve_quadratic_lasso
from solvers.cross_validation import cv_select_lambda
from solvers.sqrt_lasso import fit_sqrt_lasso
from utils.helpers import log

# τ̂² 低于该值视为退化列
TAU_SQ_FLOOR = 1e-12

METHODS = ('lasso', 'sqrt_lasso')

LambdaRule = Union[str, float]


@dataclass
class PrecisionRow:
    """精度矩阵估计的第 j 行"""

    j: int
    gamma: np.ndarray
    tau_sq: float
    theta_row: np.ndarray
    lambda_j: float
    method: str = 'lasso'
    weighting: str = 'curvature'
    scale: float = 1.0

    @property
    def theta_prime(self) -> np.ndarray:
        """标量修正前的 Θ̂′ⱼ"""
        return self.theta_row / self.scale

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "tau_sq": self.tau_sq,
            "lambda_j": self.lambda_j,
            "method": self.method,
            "weighting": self.weighting,
            "scale": self.scale,
            "theta_row": self.theta_row.tolist()
        }


def nodewise_row(
    wd: WeightedDesign,
    j: int,
    lambda_j: float,
    method: str = 'lasso',
    opts: Optional[SolverOptions] = None
) -> PrecisionRow:
    """
    计算精度矩阵的一行

    Args:
        wd: 加权设计矩阵
        j: 列下标
        lambda_j: 惩罚参数；sqrt_lasso 时为平方根 Lasso 的 λ，记录的 lambda_j 换算为等价的 2λσ̂
        method: lasso 或 sqrt_lasso
        opts: 求解器选项

    Returns:
        PrecisionRow
    """
    if not 0 <= j < wd.p:
        raise IndexError(f"列下标 {j} 超出范围 [0, {wd.p})")
    if not lambda_j > 0:
        raise ValueError(f"λⱼ 必须为正数，实际 {lambda_j}")
    if method not in METHODS:
        raise ValueError(f"未知节点回归方法: {method}（可选 {', '.join(METHODS)}）")
    opts = opts or SolverOptions()

    n, p = wd.n, wd.p
    others = np.arange(p) != j
    target = wd.WX[:, j]
    design = wd.WX[:, others]

    if method == 'sqrt_lasso':
        result = fit_sqrt_lasso(target, design, lambda_j, opts)
        gamma, lambda_j = result.gamma, result.lambda_effective
    else:
        gamma, _, _ = solve_quadratic_lasso(
            design, target, 2.0 * lambda_j,
            G=wd.gram[np.ix_(others, others)], Xy=wd.gram[others, j],
            cd_tol=opts.cd_tol, max_iter=opts.max_iter, polish=opts.polish
        )

    resid = target - design @ gamma
    tau_sq = float(resid @ resid) / n + lambda_j * float(np.sum(np.abs(gamma)))
    if not tau_sq > TAU_SQ_FLOOR:
        raise DegenerateColumnError(j, tau_sq)

    theta_row = np.zeros(p)
    theta_row[j] = 1.0 / tau_sq
    theta_row[others] = -gamma / tau_sq
    return PrecisionRow(j=j, gamma=gamma, tau_sq=tau_sq, theta_row=theta_row,
                        lambda_j=float(lambda_j), method=method, weighting=wd.weighting)


def select_lambda_j(
    wd: WeightedDesign,
    j: int,
    lambda_rule: LambdaRule,
    sqrt_c: float,
    seed: int,
    opts: SolverOptions
) -> float:
    """
    解析第 j 列的 λⱼ

    cv：在 (ŴX₋ⱼ, ŴXⱼ) 上做平方损失交叉验证；选出的 λ 对应 (1/n)‖r‖² + λ‖γ‖₁，故 λⱼ = λ/2
    sqrt：通用 λ = c·√(log p / n)
    数值：直接使用
    """
    if lambda_rule == 'cv':
        others = np.arange(wd.p) != j
        path = cv_select_lambda(QuadraticLoss(), Dataset(wd.WX[:, others], wd.WX[:, j]),
                                seed=seed, opts=opts.with_(intercept=False, standardize=False))
        return path.selected_lambda / 2.0
    if lambda_rule == 'sqrt':
        return universal_lambda(wd.n, wd.p, sqrt_c)
    return float(lambda_rule)


def universal_lambda(n: int, p: int, c: Optional[float] = None) -> float:
    """c·√(log p / n)，p = 1 时按 p = 2 计算以保证 λ > 0"""
    c = Settings.SQRT_C if c is None else c
    return c * float(np.sqrt(np.log(max(p, 2)) / n))


def _row_task(wd, j, lambda_rule, method, sqrt_c, seed, opts) -> PrecisionRow:
    if wd.p == 1:
        # 无其余列：γ 为空，λ 不影响结果
        return nodewise_row(wd, j, 1.0, 'lasso', opts)
    lam = select_lambda_j(wd, j, lambda_rule, sqrt_c, seed, opts)
    return nodewise_row(wd, j, lam, method, opts)


def precision_rows(
    wd: WeightedDesign,
    columns: Optional[Sequence[int]] = None,
    lambda_rule: Optional[LambdaRule] = None,
    method: str = 'lasso',
    sqrt_c: Optional[float] = None,
    seed: Optional[int] = None,
    opts: Optional[SolverOptions] = None,
    n_jobs: int = 1
) -> List[PrecisionRow]:
    """在已构造的加权设计矩阵上并行计算请求的各行，输出按列下标排序"""
    columns = list(range(wd.p)) if columns is None else sorted({int(j) for j in columns})
    if not columns:
        raise ValueError("至少需要请求一列")
    if lambda_rule is None:
        lambda_rule = 'sqrt' if method == 'sqrt_lasso' else 'cv'
    seed = Settings.SEED if seed is None else seed
    opts = opts or SolverOptions()
    return Parallel(n_jobs=n_jobs)(
        delayed(_row_task)(wd, j, lambda_rule, method, sqrt_c, seed, opts) for j in columns
    )


def precision_estimate(
    spec: LossSpec,
    data: Dataset,
    beta_hat: Coefficients,
    columns: Optional[Sequence[int]] = None,
    lambda_rule: Optional[LambdaRule] = None,
    method: str = 'lasso',
    weighting: Optional[str] = None,
    sqrt_c: Optional[float] = None,
    seed: Optional[int] = None,
    opts: Optional[SolverOptions] = None,
    n_jobs: int = 1
) -> List[PrecisionRow]:
    """
    节点回归估计 Θ̂ 的请求行（未做标量修正）

    Args:
        spec: 损失族
        data: 数据集
        beta_hat: 初始估计
        columns: 需要的列，默认全部；只计算请求的列
        lambda_rule: cv / sqrt / 固定数值；默认 lasso 用 cv，sqrt_lasso 用通用 λ
        method: lasso 或 sqrt_lasso
        weighting: curvature 或 unit，默认按损失族
        sqrt_c: 通用 λ 的常数 c
        seed: 交叉验证折划分种子
        opts: 求解器选项
        n_jobs: 并行列数

    Returns:
        按列下标排序的 PrecisionRow 列表
    """
    wd = build_weighted_design(spec, data, beta_hat, weighting)
    rows = precision_rows(wd, columns, lambda_rule, method, sqrt_c, seed, opts, n_jobs)
    log(f"节点回归完成：{len(rows)} 列（{method}，{wd.weighting} 权重）", "INFO", "precision_estimate")
    return rows


def assemble_theta(rows: Sequence[PrecisionRow], p: int) -> np.ndarray:
    """把计算过的行拼成 p×p 矩阵，未计算的行为 NaN"""
    theta = np.full((p, p), np.nan)
    for row in rows:
        theta[row.j] = row.theta_row
    return theta


def extended_kkt_residual(wd: WeightedDesign, row: PrecisionRow) -> float:
    """‖Σ̂Θ̂′ⱼ − eⱼ‖∞（Θ̂′ⱼ 为标量修正前的行）"""
    gap = wd.sigma_hat() @ row.theta_prime
    gap[row.j] -= 1.0
    return float(np.max(np.abs(gap)))

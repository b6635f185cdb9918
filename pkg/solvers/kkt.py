"""KKT 条件检查

估计方程 Pₙψ_β̂ + λẐ = 0 的近似满足程度
"""

from typing import Optional

import numpy as np

from models.base import Coefficients, Dataset
from models.errors import DimensionMismatchError
from models.losses import LossSpec

# 残差绝对值低于该阈值的样本视为落在 check 损失的拐点上
KINK_TOL = 1e-6


def kkt_residual(
    spec: LossSpec,
    data: Dataset,
    beta: Coefficients,
    lam: float,
    penalty_factor: Optional[np.ndarray] = None
) -> float:
    """
    ‖Pₙψ_β̂ + λẐ‖∞，Ẑ 取最优次梯度

    活跃坐标：|gⱼ + λcⱼ·sign(β̂ⱼ)|；非活跃坐标：max(0, |gⱼ| − λcⱼ)。
    分位数损失在拐点样本（|yᵢ − Xᵢᵀβ̂| ≤ KINK_TOL）上先取权重 0，其次梯度可在 [−q, 1−q] 中任取，这部分自由度从残差中扣除。
    带截距时，截距坐标（不惩罚）的 |Pₙw| 也计入。

    Returns:
        KKT 残差
    """
    u = beta.linear_predictor(data.X)
    w = np.asarray(spec.weight(u, data.y), dtype=float)
    kinks = np.zeros(data.n, dtype=bool)
    if spec.family == 'quantile':
        kinks = np.abs(data.y - u) <= KINK_TOL
        w[kinks] = 0.0
    g = data.X.T @ w / data.n
    c = np.ones(data.p) if penalty_factor is None else penalty_factor
    b = beta.beta
    active = b != 0
    res = np.where(active, np.abs(g + lam * c * np.sign(b)), np.maximum(0.0, np.abs(g) - lam * c))
    intercept_res = abs(float(np.mean(w))) if beta.intercept is not None else 0.0

    if np.any(kinks):
        slack = max(spec.q, 1.0 - spec.q)
        res = np.maximum(0.0, res - slack * np.abs(data.X[kinks]).sum(axis=0) / data.n)
        intercept_res = max(0.0, intercept_res - slack * kinks.sum() / data.n)
    return float(max(res.max(initial=0.0), intercept_res))


def kkt_check(spec: LossSpec, data: Dataset, fit) -> float:
    """
    ‖Pₙψ_β̂‖∞（拐点处取次梯度元素 0）

    Args:
        spec: 损失族
        data: 数据集
        fit: PenalizedFit

    Returns:
        得分均值的最大绝对值
    """
    if fit.beta.shape[0] != data.p:
        raise DimensionMismatchError("拟合结果与数据维度不一致")
    u = fit.coefficients.linear_predictor(data.X)
    w = np.asarray(spec.weight(u, data.y), dtype=float)
    return float(np.max(np.abs(data.X.T @ w / data.n)))


def quantile_kkt_bound(data: Dataset, fit, tol: float = 1e-6) -> float:
    """分位数损失估计方程的上界 λ + ŝ·K_X/n + tol，K_X = maxᵢ‖Xᵢ‖∞"""
    s_hat = fit.sparsity + (1 if fit.intercept is not None else 0)
    K_X = float(np.max(np.abs(data.X)))
    lam = fit.lam if fit.penalty_factor is None else fit.lam * float(np.max(fit.penalty_factor))
    return lam + s_hat * K_X / data.n + tol

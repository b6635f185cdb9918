"""得分矩阵与目标函数"""

from typing import Optional

import numpy as np

from models.base import Coefficients, Dataset, ScoreMatrix
from models.errors import DimensionMismatchError
from models.losses import LossSpec


def score_matrix(spec: LossSpec, data: Dataset, beta: Coefficients, X: Optional[np.ndarray] = None) -> ScoreMatrix:
    """
    计算得分矩阵 ψ_β

    Args:
        spec: 损失族
        data: 数据集
        beta: 系数
        X: 用于与权重相乘的设计矩阵（带截距时传入中心化后的矩阵），默认 data.X

    Returns:
        ScoreMatrix，第 i 行为 w(yᵢ, Xᵢᵀβ)·Xᵢ
    """
    if beta.p != data.p:
        raise DimensionMismatchError(f"系数长度 {beta.p} 与数据列数 {data.p} 不一致")
    u = beta.linear_predictor(data.X)
    w = np.asarray(spec.weight(u, data.y), dtype=float)
    design = data.X if X is None else X
    if design.shape != data.X.shape:
        raise DimensionMismatchError("替代设计矩阵的形状与数据不一致")
    return ScoreMatrix(psi=w[:, None] * design, weights=w)


def objective_value(
    spec: LossSpec,
    data: Dataset,
    beta: Coefficients,
    lam: float,
    penalty_factor: Optional[np.ndarray] = None
) -> float:
    """
    (1/n)Σρ(Xᵢᵀβ + b₀, yᵢ) + λΣ cⱼ|βⱼ|

    Args:
        penalty_factor: 每列惩罚系数 cⱼ，默认全为 1

    Returns:
        目标函数值
    """
    u = beta.linear_predictor(data.X)
    loss = float(np.mean(spec.rho(u, data.y)))
    abs_beta = np.abs(beta.beta)
    if penalty_factor is not None:
        abs_beta = abs_beta * penalty_factor
    return loss + lam * float(np.sum(abs_beta))

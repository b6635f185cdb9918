"""节点回归的加权设计矩阵

Ŵ 存储 √v，使 Σ̂ = XᵀŴ²X/n = (1/n)Σ vᵢxᵢxᵢᵀ 两种写法同时成立
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from models.base import Coefficients, Dataset
from models.errors import InvalidDataError
from models.losses import LossSpec

WEIGHTINGS = ('curvature', 'unit')


@dataclass
class WeightedDesign:
    """加权设计矩阵 WX = diag(W)·X（带截距时 X 先做加权中心化）"""

    W_diag: np.ndarray
    WX: np.ndarray
    weighting: str = 'curvature'
    centers: Optional[np.ndarray] = None
    gram: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.gram = self.WX.T @ self.WX

    @property
    def n(self) -> int:
        return self.WX.shape[0]

    @property
    def p(self) -> int:
        return self.WX.shape[1]

    def sigma_hat(self) -> np.ndarray:
        """Σ̂ = XᵀŴ²X/n"""
        return self.gram / self.n


def default_weighting(spec: LossSpec, has_noise_info: bool = False) -> str:
    """
    各损失族的默认加权方式

    分位数损失总是单位权重（之后乘以标量修正）；Huber 在已知噪声常数时同样走
    单位权重 + 标量修正，否则使用得分权重 w²。
    """
    if spec.family == 'quantile':
        return 'unit'
    if spec.family == 'huber' and has_noise_info:
        return 'unit'
    return 'curvature'


def build_weighted_design(
    spec: LossSpec,
    data: Dataset,
    beta_hat: Coefficients,
    weighting: Optional[str] = None
) -> WeightedDesign:
    """
    构造 Ŵ 与 ŴX

    Args:
        spec: 损失族
        data: 数据集
        beta_hat: 初始估计（在 data 上拟合）
        weighting: curvature 或 unit，默认按 default_weighting

    Returns:
        WeightedDesign
    """
    weighting = weighting or default_weighting(spec)
    if weighting not in WEIGHTINGS:
        raise ValueError(f"未知加权方式: {weighting}（可选 {', '.join(WEIGHTINGS)}）")

    if weighting == 'unit':
        v = np.ones(data.n)
    else:
        u = beta_hat.linear_predictor(data.X)
        v = np.broadcast_to(np.asarray(spec.curvature(u, data.y), dtype=float), (data.n,)).copy()
        if np.any(v <= 0) or not np.all(np.isfinite(v)):
            raise InvalidDataError(f"{spec.family} 损失的曲率权重出现非正值，无法构造 Ŵ")

    X = data.X
    centers = None
    if beta_hat.intercept is not None:
        centers = (v @ X) / v.sum()
        X = X - centers
    W = np.sqrt(v)
    return WeightedDesign(W_diag=W, WX=W[:, None] * X, weighting=weighting, centers=centers)

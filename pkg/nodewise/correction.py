"""噪声分布常数与损失相关的标量修正

分位数损失：Θ̂ⱼ = Θ̂′ⱼ / f_ε(ξ_q)（check 损失期望得分的导数）
Huber 损失（单位权重时）：Θ̂ⱼ = Θ̂′ⱼ · K / (F_ε(K) − F_ε(−K))
平方 / logistic 损失：曲率已包含在 Ŵ 中，不做修正
"""

from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np
from scipy import stats

from models.errors import MissingNoiseInfoError
from models.losses import LossSpec
from utils.helpers import log

# 模拟误差分布：均缩放到单位方差
ERROR_DISTRIBUTIONS = {
    'gaussian': lambda: stats.norm(),
    't3': lambda: stats.t(df=3, scale=np.sqrt(1.0 / 3.0)),
    't5': lambda: stats.t(df=5, scale=np.sqrt(3.0 / 5.0)),
}


@dataclass
class NoiseInfo:
    """标量修正与闭式方差所需的噪声分布常数"""

    density: Optional[float] = None
    cdf_plus_k: Optional[float] = None
    cdf_minus_k: Optional[float] = None
    second_moment_within_k: Optional[float] = None
    huber_k: Optional[float] = None
    quantile_q: float = 0.5
    source: str = "true"

    @property
    def mass_within_k(self) -> Optional[float]:
        """F(K) − F(−K)"""
        if self.cdf_plus_k is None or self.cdf_minus_k is None:
            return None
        return self.cdf_plus_k - self.cdf_minus_k

    @classmethod
    def from_distribution(
        cls,
        error_dist: str,
        huber_k: Optional[float] = None,
        quantile_q: float = 0.5
    ) -> 'NoiseInfo':
        """
        由已知误差分布计算真实常数

        Args:
            error_dist: gaussian / t3 / t5
            huber_k: Huber 半径，给定时计算 F(±K) 与 E[ε²·1{|ε|≤K}]
            quantile_q: 分位数水平，密度在 ε 的 q 分位点处取值

        Returns:
            NoiseInfo
        """
        if error_dist not in ERROR_DISTRIBUTIONS:
            raise MissingNoiseInfoError(f"误差分布 {error_dist} 没有可用的噪声常数")
        dist = ERROR_DISTRIBUTIONS[error_dist]()
        info = cls(density=float(dist.pdf(dist.ppf(quantile_q))), quantile_q=quantile_q,
                   source=error_dist)
        if huber_k is not None:
            info.huber_k = float(huber_k)
            info.cdf_plus_k = float(dist.cdf(huber_k))
            info.cdf_minus_k = float(dist.cdf(-huber_k))
            info.second_moment_within_k = float(dist.expect(lambda x: x * x, lb=-huber_k, ub=huber_k))
        return info

    @classmethod
    def estimate(
        cls,
        residuals: np.ndarray,
        huber_k: Optional[float] = None,
        quantile_q: float = 0.5
    ) -> 'NoiseInfo':
        """
        由残差估计噪声常数（实验性）

        密度用 Silverman 带宽的高斯核密度估计，在残差的 q 分位点处取值。
        """
        residuals = np.asarray(residuals, dtype=float)
        log("噪声密度由核密度估计给出，属实验性功能", "WARN", "NoiseInfo")
        kde = stats.gaussian_kde(residuals, bw_method='silverman')
        xi = float(np.quantile(residuals, quantile_q))
        info = cls(density=float(kde(xi)[0]), quantile_q=quantile_q, source="kde")
        if huber_k is not None:
            info.huber_k = float(huber_k)
            info.cdf_plus_k = float(kde.integrate_box_1d(-np.inf, huber_k))
            info.cdf_minus_k = float(kde.integrate_box_1d(-np.inf, -huber_k))
            inside = np.abs(residuals) <= huber_k
            info.second_moment_within_k = float(np.mean(np.where(inside, residuals ** 2, 0.0)))
        return info

    def to_dict(self) -> dict:
        return {
            "density": self.density,
            "cdf_plus_k": self.cdf_plus_k,
            "cdf_minus_k": self.cdf_minus_k,
            "second_moment_within_k": self.second_moment_within_k,
            "huber_k": self.huber_k,
            "quantile_q": self.quantile_q,
            "source": self.source
        }


def correction_scale(spec: LossSpec, noise: Optional[NoiseInfo], weighting: str = 'unit') -> float:
    """
    Θ̂′ 到 Θ̂ 的标量因子

    Args:
        spec: 损失族
        noise: 噪声常数
        weighting: 节点回归使用的加权方式；Huber 的 w² 权重不需要修正

    Returns:
        标量因子
    """
    if spec.family == 'quantile':
        if noise is None or noise.density is None:
            raise MissingNoiseInfoError("分位数损失的修正需要噪声密度 f_ε")
        if not noise.density > 0:
            raise ValueError(f"噪声密度必须为正数，实际 {noise.density}")
        return 1.0 / noise.density
    if spec.family == 'huber' and weighting == 'unit':
        mass = None if noise is None else noise.mass_within_k
        if mass is None:
            raise MissingNoiseInfoError("Huber 损失的修正需要 F_ε(K) 与 F_ε(−K)")
        if noise.huber_k is not None and not np.isclose(noise.huber_k, spec.K):
            raise ValueError(f"噪声常数按 K={noise.huber_k} 计算，与损失的 K={spec.K} 不一致")
        if not mass > 0:
            raise ValueError(f"F(K) − F(−K) 必须为正数，实际 {mass}")
        return spec.K / mass
    return 1.0


def loss_scale_correction(spec: LossSpec, rows: List, noise: Optional[NoiseInfo] = None) -> List:
    """
    对节点回归得到的 Θ̂′ⱼ 施加损失相关的标量修正

    Args:
        spec: 损失族
        rows: PrecisionRow 列表（未修正）
        noise: 噪声常数

    Returns:
        修正后的新 PrecisionRow 列表，scale 字段记录所乘因子
    """
    corrected = []
    for row in rows:
        scale = correction_scale(spec, noise, row.weighting)
        corrected.append(replace(row, theta_row=row.theta_row * scale, scale=row.scale * scale))
    return corrected

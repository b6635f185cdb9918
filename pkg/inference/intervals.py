"""置信区间与双侧 p 值"""

from typing import Tuple

import numpy as np
from scipy.stats import norm

from desparsify.estimator import DesparsifiedEstimate


def z_quantile(alpha: float) -> float:
    """Φ⁻¹(1 − α/2)"""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha 必须位于 (0, 1)，实际 {alpha}")
    return float(norm.ppf(1.0 - alpha / 2.0))


def confidence_interval(est: DesparsifiedEstimate, alpha: float) -> Tuple[float, float]:
    """
    渐近 (1 − α) 置信区间 b̂ⱼ ± Φ⁻¹(1 − α/2)·σ̂ⱼ/√n

    Args:
        est: 去稀疏化估计
        alpha: 显著性水平

    Returns:
        (下界, 上界)
    """
    half = z_quantile(alpha) * est.standard_error
    return est.b_hat_j - half, est.b_hat_j + half


def p_value(est: DesparsifiedEstimate) -> float:
    """H₀: βⱼ = 0 的双侧 z 检验 p 值 2(1 − Φ(√n|b̂ⱼ|/σ̂ⱼ))"""
    if not est.sigma_hat_j > 0:
        raise ValueError("σ̂ⱼ 必须为正数")
    return float(2.0 * norm.sf(abs(est.z_value)))


def interval_length(est: DesparsifiedEstimate, alpha: float) -> float:
    """置信区间长度 2z·σ̂ⱼ/√n"""
    return 2.0 * z_quantile(alpha) * est.standard_error


def covers(est: DesparsifiedEstimate, alpha: float, truth: float) -> bool:
    lo, hi = confidence_interval(est, alpha)
    return bool(lo <= truth <= hi)


def two_sided_p(z: np.ndarray) -> np.ndarray:
    """向量化的双侧 p 值"""
    return 2.0 * norm.sf(np.abs(np.asarray(z, dtype=float)))

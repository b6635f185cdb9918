"""已知噪声分布与真实 Θ⁰ 时的精度矩阵尺度和闭式渐近方差

仅用于模拟中的 oracle 模式和测试对照
"""

from typing import Optional

import numpy as np

from models.errors import MissingNoiseInfoError
from models.losses import LossSpec
from nodewise.correction import NoiseInfo


def true_precision_scale(spec: LossSpec, noise: Optional[NoiseInfo] = None) -> float:
    """
    Θ = c·Θ⁰ 中的标量 c，Θ⁰ = (E XXᵀ)⁻¹

    平方损失 1/2；分位数 1/f_ε(ξ_q)；Huber K/(F(K) − F(−K))；logistic 无闭式。
    """
    if spec.family == 'quadratic':
        return 0.5
    if spec.family == 'logistic':
        raise ValueError("logistic 模型的真实 Θ 没有闭式表达，不支持 oracle 模式")
    if noise is None:
        raise MissingNoiseInfoError(f"{spec.family} 损失的 oracle 尺度需要噪声常数")
    if spec.family == 'quantile':
        return 1.0 / noise.density
    return spec.K / noise.mass_within_k


def oracle_theta(spec: LossSpec, theta0: np.ndarray, noise: Optional[NoiseInfo] = None) -> np.ndarray:
    """真实 Θ = c·Θ⁰"""
    return true_precision_scale(spec, noise) * np.asarray(theta0, dtype=float)


def sigma_sq_quadratic(theta0_jj: float, noise_var: float = 1.0) -> float:
    """平方损失：σ²_ε·Θ⁰ⱼⱼ"""
    return noise_var * theta0_jj


def sigma_sq_lad(theta0_jj: float, density: float) -> float:
    """LAD：Θ′ⱼⱼ/(4f_ε(0)²)"""
    return theta0_jj / (4.0 * density ** 2)


def sigma_sq_huber(theta0_jj: float, noise: NoiseInfo, K: float) -> float:
    """
    Huber（1/(2K) 缩放）：Θ⁰ⱼⱼ·(E[ε²·1{|ε|≤K}] + K²·P(|ε|>K)) / (F(K) − F(−K))²

    得分 w 在 |ε| ≤ K 时为 −ε/K，否则为 ∓1，期望得分导数为 (F(K) − F(−K))/K。
    """
    mass = noise.mass_within_k
    if mass is None or noise.second_moment_within_k is None:
        raise MissingNoiseInfoError("Huber 闭式方差需要 F(±K) 与截断二阶矩")
    return theta0_jj * (noise.second_moment_within_k + K * K * (1.0 - mass)) / mass ** 2

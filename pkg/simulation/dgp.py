"""模拟数据生成过程

X 的行独立服从 N(0, Σ₀)，Σ₀ = (Θ⁰)⁻¹，Θ⁰ 为三对角矩阵（对角 1，次对角 0.3）；
β₀ 前 s₀ 个分量为 1，其余为 0。线性模型 y = Xβ₀ + ε，误差缩放到单位方差；
logistic 模型 yᵢ ~ Bernoulli(1/(1 + exp(−Xᵢᵀβ₀)))。
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Tuple

import numpy as np
from numpy.random import Generator, Philox, SeedSequence
from scipy.special import expit

from config.settings import Settings
from models.base import Coefficients, Dataset

ERROR_LAWS = ('gaussian', 't3', 't5', 'logistic_bernoulli')

# 随机数流编号
STREAM_DESIGN = 0
STREAM_ERRORS = 1
STREAM_CV_INITIAL = 2
STREAM_CV_NODEWISE = 3


def make_rng(seed: int, replication: int = 0, stream: int = 0) -> Generator:
    """以 (seed, replication, stream) 为键的计数器型随机数生成器"""
    return Generator(Philox(SeedSequence(seed, spawn_key=(replication, stream))))


def derive_seed(seed: int, replication: int, stream: int) -> int:
    """为接受整数种子的组件（交叉验证折划分）派生种子"""
    return int(make_rng(seed, replication, stream).integers(0, 2 ** 31 - 1))


@dataclass
class DgpConfig:
    """数据生成配置"""

    n: int
    p: int
    s0: int = 3
    error_dist: str = 'gaussian'
    seed: int = field(default_factory=lambda: Settings.SEED)
    off_diagonal: float = 0.3

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError(f"需要 n ≥ 1 且 p ≥ 1，实际 n={self.n}, p={self.p}")
        if not 0 <= self.s0 <= self.p:
            raise ValueError(f"s0 必须位于 [0, p]，实际 {self.s0}")
        if self.error_dist not in ERROR_LAWS:
            raise ValueError(f"未知误差分布: {self.error_dist}（可选 {', '.join(ERROR_LAWS)}）")
        # Cholesky 分解成功即 Θ⁰ 正定
        np.linalg.cholesky(self.theta0)

    @property
    def is_logistic(self) -> bool:
        return self.error_dist == 'logistic_bernoulli'

    @cached_property
    def theta0(self) -> np.ndarray:
        """三对角精度矩阵 Θ⁰"""
        theta = np.eye(self.p)
        idx = np.arange(self.p - 1)
        theta[idx, idx + 1] = self.off_diagonal
        theta[idx + 1, idx] = self.off_diagonal
        return theta

    @cached_property
    def sigma0(self) -> np.ndarray:
        """协方差矩阵 Σ₀ = (Θ⁰)⁻¹"""
        return np.linalg.inv(self.theta0)

    @cached_property
    def sigma0_cholesky(self) -> np.ndarray:
        return np.linalg.cholesky(self.sigma0)

    @property
    def beta0(self) -> np.ndarray:
        beta = np.zeros(self.p)
        beta[:self.s0] = 1.0
        return beta

    @property
    def support(self) -> np.ndarray:
        """S₀"""
        return np.arange(self.s0)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "s0": self.s0,
            "error_dist": self.error_dist,
            "seed": self.seed,
            "off_diagonal": self.off_diagonal
        }


def draw_errors(error_dist: str, size: int, rng: Generator) -> np.ndarray:
    """单位方差误差：t₃ 乘 √(1/3)，t₅ 乘 √(3/5)"""
    if error_dist == 'gaussian':
        return rng.standard_normal(size)
    if error_dist == 't3':
        return rng.standard_t(3, size) * np.sqrt(1.0 / 3.0)
    if error_dist == 't5':
        return rng.standard_t(5, size) * np.sqrt(3.0 / 5.0)
    raise ValueError(f"{error_dist} 不是加性误差分布")


def generate(cfg: DgpConfig, replication: int = 0) -> Tuple[Dataset, Coefficients]:
    """
    生成一次重复的数据

    Args:
        cfg: 数据生成配置
        replication: 重复编号，与 cfg.seed 一起决定随机数流

    Returns:
        (数据集, 真实系数)
    """
    design_rng = make_rng(cfg.seed, replication, STREAM_DESIGN)
    X = design_rng.standard_normal((cfg.n, cfg.p)) @ cfg.sigma0_cholesky.T
    beta0 = cfg.beta0
    eta = X @ beta0

    error_rng = make_rng(cfg.seed, replication, STREAM_ERRORS)
    if cfg.is_logistic:
        y = (error_rng.random(cfg.n) < expit(eta)).astype(float)
    else:
        y = eta + draw_errors(cfg.error_dist, cfg.n, error_rng)
    return Dataset(X, y), Coefficients(beta0)

"""损失族定义

每个损失族提供 ρ(u, y)、权重函数 w(y, u) = ∂ρ/∂u 以及节点回归使用的曲率权重 v。
所有方法对标量和 numpy 数组都适用（逐元素计算）。
"""

from abc import ABC, abstractmethod
from typing import Optional, Union

import numpy as np
from scipy.special import expit

from models.errors import InvalidLossError

ArrayLike = Union[float, np.ndarray]


def _out(value: np.ndarray) -> ArrayLike:
    """零维结果返回 Python float"""
    return float(value) if np.ndim(value) == 0 else value


class LossSpec(ABC):
    """损失族抽象基类"""

    family: str = ""

    @abstractmethod
    def rho(self, u: ArrayLike, y: ArrayLike) -> ArrayLike:
        """损失值 ρ(u, y)"""
        pass

    @abstractmethod
    def weight(self, u: ArrayLike, y: ArrayLike) -> ArrayLike:
        """权重函数 w = ∂ρ/∂u（不可微点取次梯度元素）"""
        pass

    @abstractmethod
    def curvature(self, u: ArrayLike, y: ArrayLike) -> ArrayLike:
        """节点回归权重 v，使 Σ̂ = (1/n)Σ vᵢ xᵢxᵢᵀ"""
        pass

    @property
    def majorizer(self) -> Optional[float]:
        """w 关于 u 的 Lipschitz 常数（二次上界的曲率），不可微损失返回 None"""
        return None

    @property
    def smooth(self) -> bool:
        return self.majorizer is not None

    def to_dict(self) -> dict:
        """转换为字典格式"""
        return {"family": self.family}

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.to_dict().items() if k != "family")
        return f"{self.__class__.__name__}({params})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LossSpec) and self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.to_dict().items())))


class QuadraticLoss(LossSpec):
    """平方损失 (y − u)²"""

    family = "quadratic"

    def rho(self, u, y):
        return _out(np.square(np.asarray(y, dtype=float) - u))

    def weight(self, u, y):
        return _out(-2.0 * (np.asarray(y, dtype=float) - u))

    def curvature(self, u, y):
        return _out(np.full(np.broadcast(np.asarray(u), np.asarray(y)).shape, 2.0))

    @property
    def majorizer(self) -> float:
        return 2.0


class HuberLoss(LossSpec):
    """Huber 损失，采用 1/(2K) 缩放：[z²·1{|z|≤K} + K(2|z|−K)·1{|z|>K}]/(2K)，z = y − u"""

    family = "huber"

    def __init__(self, K: float):
        if not K > 0:
            raise InvalidLossError(f"Huber 半径 K 必须为正数，实际 {K}")
        self.K = float(K)

    def rho(self, u, y):
        z = np.abs(np.asarray(y, dtype=float) - u)
        K = self.K
        return _out(np.where(z <= K, z * z, K * (2.0 * z - K)) / (2.0 * K))

    def weight(self, u, y):
        z = np.asarray(y, dtype=float) - u
        return _out(np.where(np.abs(z) <= self.K, -z / self.K, -np.sign(z)))

    def curvature(self, u, y):
        return _out(np.square(self.weight(u, y)))

    @property
    def majorizer(self) -> float:
        return 1.0 / self.K

    def to_dict(self) -> dict:
        return {"family": self.family, "K": self.K}


class QuantileLoss(LossSpec):
    """分位数（check）损失；q = 0.5 时为绝对损失的一半"""

    family = "quantile"

    def __init__(self, q: float):
        if not 0 < q < 1:
            raise InvalidLossError(f"分位数水平 q 必须位于 (0,1)，实际 {q}")
        self.q = float(q)

    def rho(self, u, y):
        z = np.asarray(y, dtype=float) - u
        return _out(np.where(z > 0, self.q * z, (self.q - 1.0) * z))

    def weight(self, u, y):
        z = np.asarray(y, dtype=float) - u
        # y = u 处取次梯度元素 0
        return _out(np.where(z > 0, -self.q, np.where(z < 0, 1.0 - self.q, 0.0)))

    def curvature(self, u, y):
        return _out(np.ones(np.broadcast(np.asarray(u), np.asarray(y)).shape))

    def prox(self, z: np.ndarray, t: float) -> np.ndarray:
        """check 损失的近端映射 prox_{tρ_q}(z)"""
        return np.where(
            z > t * self.q, z - t * self.q,
            np.where(z < -t * (1.0 - self.q), z + t * (1.0 - self.q), 0.0)
        )

    def to_dict(self) -> dict:
        return {"family": self.family, "q": self.q}


class LogisticLoss(LossSpec):
    """logistic 损失 −y·u + log(1 + eᵘ)"""

    family = "logistic"

    def rho(self, u, y):
        u = np.asarray(u, dtype=float)
        return _out(-np.asarray(y, dtype=float) * u + np.logaddexp(0.0, u))

    def weight(self, u, y):
        return _out(expit(u) - np.asarray(y, dtype=float))

    def curvature(self, u, y):
        u = np.asarray(u, dtype=float)
        value = expit(u) * expit(-u)
        return _out(value + np.zeros(np.broadcast(u, np.asarray(y)).shape))

    @property
    def majorizer(self) -> float:
        return 0.25


LOSS_FAMILIES = ('quadratic', 'huber', 'quantile', 'logistic')


def make_loss(family: str, huber_k: Optional[float] = None, quantile_q: Optional[float] = None) -> LossSpec:
    """
    根据名称构造损失族

    Args:
        family: quadratic / huber / quantile / logistic
        huber_k: Huber 半径 K（仅 huber）
        quantile_q: 分位数水平 q（仅 quantile，默认 0.5）

    Returns:
        LossSpec 实例
    """
    if family == 'quadratic':
        return QuadraticLoss()
    if family == 'logistic':
        return LogisticLoss()
    if family == 'huber':
        if huber_k is None:
            raise InvalidLossError("huber 损失需要指定 K")
        return HuberLoss(huber_k)
    if family == 'quantile':
        return QuantileLoss(0.5 if quantile_q is None else quantile_q)
    raise InvalidLossError(f"未知损失族: {family}（可选 {', '.join(LOSS_FAMILIES)}）")


def loss_from_dict(data: dict) -> LossSpec:
    """从 to_dict() 的结果恢复损失族"""
    return make_loss(data['family'], huber_k=data.get('K'), quantile_q=data.get('q'))


def loss_value(spec: LossSpec, u: ArrayLike, y: ArrayLike) -> ArrayLike:
    """ρ(u, y)"""
    return spec.rho(u, y)


def weight(spec: LossSpec, u: ArrayLike, y: ArrayLike) -> ArrayLike:
    """w(y, u) = ∂ρ/∂u"""
    return spec.weight(u, y)


def curvature_weight(spec: LossSpec, u: ArrayLike, y: ArrayLike) -> ArrayLike:
    """节点回归权重 v"""
    return spec.curvature(u, y)

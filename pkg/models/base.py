"""核心数据类型

定义数据集、系数向量和得分矩阵
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from models.errors import DimensionMismatchError, InvalidDataError


@dataclass
class Dataset:
    """数据集：n×p 协变量矩阵 X 与长度为 n 的响应 y"""

    X: np.ndarray
    y: np.ndarray
    feature_names: Optional[List[str]] = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=float).ravel()
        if self.X.ndim != 2:
            raise DimensionMismatchError(f"X 必须是二维矩阵，实际维度 {self.X.ndim}")
        n, p = self.X.shape
        if n < 1 or p < 1:
            raise DimensionMismatchError(f"需要 n ≥ 1 且 p ≥ 1，实际 n={n}, p={p}")
        if self.y.shape[0] != n:
            raise DimensionMismatchError(f"y 长度 {self.y.shape[0]} 与 X 行数 {n} 不一致")
        if not (np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.y))):
            raise InvalidDataError("数据中包含 NaN 或 Inf")
        if self.feature_names is not None and len(self.feature_names) != p:
            raise DimensionMismatchError("feature_names 长度与列数不一致")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def validate_for(self, spec) -> None:
        """检查数据是否适用于给定的损失族"""
        if spec.family == 'logistic' and not np.all((self.y == 0) | (self.y == 1)):
            raise InvalidDataError("logistic 损失要求响应取值于 {0, 1}")

    def subset(self, rows: Sequence[int]) -> 'Dataset':
        """按行取子集（交叉验证用）"""
        rows = np.asarray(rows)
        return Dataset(self.X[rows], self.y[rows], self.feature_names)

    def columns(self, idx: Sequence[int]) -> 'Dataset':
        """按列取子集（筛选后使用）"""
        idx = np.asarray(idx, dtype=int)
        names = None
        if self.feature_names is not None:
            names = [self.feature_names[k] for k in idx]
        return Dataset(self.X[:, idx], self.y, names)

    def __repr__(self) -> str:
        return f"Dataset(n={self.n}, p={self.p})"


@dataclass
class Coefficients:
    """系数向量 β，截距可选（模拟中不使用截距）"""

    beta: np.ndarray
    intercept: Optional[float] = None

    def __post_init__(self):
        self.beta = np.asarray(self.beta, dtype=float).ravel()

    @property
    def p(self) -> int:
        return self.beta.shape[0]

    def linear_predictor(self, X: np.ndarray) -> np.ndarray:
        """计算 Xβ (+ 截距)"""
        if X.shape[1] != self.p:
            raise DimensionMismatchError(f"系数长度 {self.p} 与 X 列数 {X.shape[1]} 不一致")
        u = X @ self.beta
        if self.intercept is not None:
            u = u + self.intercept
        return u

    def to_dict(self) -> dict:
        """转换为字典格式"""
        return {
            "beta": self.beta.tolist(),
            "intercept": self.intercept
        }


@dataclass
class ScoreMatrix:
    """得分矩阵：第 i 行为 ψ_β(Xᵢ, yᵢ) = w(yᵢ, Xᵢᵀβ)·Xᵢ"""

    psi: np.ndarray
    weights: np.ndarray = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return self.psi.shape[0]

    def mean(self) -> np.ndarray:
        """Pₙψ_β：按行取平均"""
        return self.psi.mean(axis=0)

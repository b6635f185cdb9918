"""去稀疏化估计量与渐近方差

b̂ⱼ = β̂ⱼ − Θ̂ⱼᵀPₙψ_β̂，σ̂ⱼ² = (1/n)Σᵢ(Θ̂ⱼᵀψᵢ)²
"""

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from models.base import Dataset, ScoreMatrix
from models.errors import DimensionMismatchError, MissingPrecisionRowError, ZeroVarianceError
from models.losses import LossSpec
from models.scores import score_matrix
from nodewise.regression import PrecisionRow
from solvers.base import PenalizedFit

ThetaOverride = Union[np.ndarray, Mapping[int, np.ndarray]]


@dataclass
class DesparsifiedEstimate:
    """单个坐标的去稀疏化估计"""

    j: int
    beta_hat_j: float
    correction_j: float
    b_hat_j: float
    sigma_hat_j: float
    n: int
    oracle: bool = False

    @property
    def standard_error(self) -> float:
        """σ̂ⱼ/√n"""
        return self.sigma_hat_j / np.sqrt(self.n)

    @property
    def z_value(self) -> float:
        """√n·b̂ⱼ/σ̂ⱼ"""
        return self.b_hat_j / self.standard_error

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "beta_hat": self.beta_hat_j,
            "correction": self.correction_j,
            "b_hat": self.b_hat_j,
            "sigma_hat": self.sigma_hat_j,
            "n": self.n,
            "oracle": self.oracle
        }


def projected_variance(theta_row: np.ndarray, scores: ScoreMatrix) -> float:
    """Θⱼᵀ Pₙψψᵀ Θⱼ，不构造 p×p 矩阵"""
    projected = scores.psi @ theta_row
    value = float(np.mean(projected * projected))
    if not value > 0:
        raise ZeroVarianceError("投影得分全部为零，方差估计为零")
    return value


def estimate_variance(rows: Sequence[PrecisionRow], scores: ScoreMatrix) -> Dict[int, float]:
    """
    代入式（plug-in）渐近方差 σ̂ⱼ²

    Args:
        rows: 精度矩阵的行
        scores: β̂ 处的得分矩阵

    Returns:
        {j: σ̂ⱼ²}
    """
    return {row.j: projected_variance(row.theta_row, scores) for row in rows}


def _theta_lookup(rows: Sequence[PrecisionRow], theta_override: Optional[ThetaOverride]) -> Dict[int, np.ndarray]:
    if theta_override is None:
        return {row.j: row.theta_row for row in rows}
    if isinstance(theta_override, np.ndarray):
        return {j: theta_override[j] for j in range(theta_override.shape[0])}
    return {int(j): np.asarray(v, dtype=float) for j, v in theta_override.items()}


def desparsify(
    spec: LossSpec,
    data: Dataset,
    fit: PenalizedFit,
    rows: Sequence[PrecisionRow],
    columns: Optional[Sequence[int]] = None,
    theta_override: Optional[ThetaOverride] = None,
    centers: Optional[np.ndarray] = None
) -> List[DesparsifiedEstimate]:
    """
    计算去稀疏化估计

    Args:
        spec: 损失族
        data: 数据集
        fit: 初始惩罚拟合
        rows: 同一 β̂ 处的精度矩阵行
        columns: 需要的坐标，默认 rows 覆盖的全部坐标
        theta_override: 模拟中注入的真实 Θ（整矩阵或 {j: 行}），得到 b̃ⱼ
        centers: 带截距时用于中心化得分的列中心，默认列均值

    Returns:
        按坐标排序的 DesparsifiedEstimate 列表
    """
    if fit.beta.shape[0] != data.p:
        raise DimensionMismatchError(f"拟合结果长度 {fit.beta.shape[0]} 与数据列数 {data.p} 不一致")
    theta = _theta_lookup(rows, theta_override)
    columns = sorted(theta) if columns is None else sorted({int(j) for j in columns})

    X = None
    if fit.intercept is not None:
        X = data.X - (data.X.mean(axis=0) if centers is None else centers)
    scores = score_matrix(spec, data, fit.coefficients, X)
    if not np.all(np.isfinite(scores.psi)):
        raise ValueError("得分矩阵包含非有限值")
    score_mean = scores.mean()

    estimates = []
    for j in columns:
        if j not in theta:
            raise MissingPrecisionRowError(f"缺少第 {j} 个坐标的精度矩阵行")
        row = np.asarray(theta[j], dtype=float)
        if row.shape[0] != data.p:
            raise DimensionMismatchError(f"第 {j} 行长度 {row.shape[0]} 与数据列数 {data.p} 不一致")
        correction = float(row @ score_mean)
        beta_j = float(fit.beta[j])
        estimates.append(DesparsifiedEstimate(
            j=j,
            beta_hat_j=beta_j,
            correction_j=correction,
            b_hat_j=beta_j - correction,
            sigma_hat_j=float(np.sqrt(projected_variance(row, scores))),
            n=data.n,
            oracle=theta_override is not None
        ))
    return estimates

"""边际相关筛选 ωᵢ = |yᵀXᵢ|（不中心化、不标准化）"""

from dataclasses import dataclass

import numpy as np

from models.base import Dataset


@dataclass
class ScreenResult:
    """筛选结果：按得分降序排列的列下标及其得分"""

    indices: np.ndarray
    scores: np.ndarray

    @property
    def kept(self) -> np.ndarray:
        """升序排列的保留列，用于取子数据集"""
        return np.sort(self.indices)

    def to_dict(self) -> dict:
        return {"indices": self.indices.tolist(), "scores": self.scores.tolist()}


def screen(data: Dataset, m: int) -> ScreenResult:
    """
    保留 ωᵢ 最大的 m 列，得分相同时下标小者优先

    Args:
        data: 数据集
        m: 保留列数，1 ≤ m ≤ p

    Returns:
        ScreenResult
    """
    if not 1 <= m <= data.p:
        raise ValueError(f"筛选列数 m 必须位于 [1, {data.p}]，实际 {m}")
    omega = np.abs(data.y @ data.X)
    order = np.argsort(-omega, kind='stable')[:m]
    return ScreenResult(indices=order, scores=omega[order])

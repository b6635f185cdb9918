"""推断报告：置信区间、原始/校正 p 值与阈值选择"""

from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Set

import numpy as np
import pandas as pd

from desparsify.estimator import DesparsifiedEstimate
from inference.intervals import confidence_interval, p_value
from inference.multiple_testing import ADJUST_METHODS, bh_adjust, bonferroni_adjust, holm_adjust


def threshold_level(est: DesparsifiedEstimate, p: int) -> float:
    """2σ̂ⱼ√(log p / n)"""
    return 2.0 * est.sigma_hat_j * float(np.sqrt(np.log(p) / est.n))


def threshold_select(ests: Sequence[DesparsifiedEstimate], p: int) -> Set[int]:
    """
    阈值选择 {j : |b̂ⱼ| > 2σ̂ⱼ√(log p / n)}（严格不等号）

    Args:
        ests: 去稀疏化估计
        p: 总变量数（筛选前的 p）

    Returns:
        被选中的坐标集合
    """
    if p < 2:
        raise ValueError(f"阈值规则要求 p ≥ 2，实际 {p}")
    return {est.j for est in ests if abs(est.b_hat_j) > threshold_level(est, p)}


@dataclass
class CoordinateRecord:
    """报告中的一行"""

    j: int
    b_hat: float
    sigma_hat: float
    ci_lo: float
    ci_hi: float
    p_value: float
    p_holm: float
    p_bh: float
    p_bonferroni: float
    reject_holm: bool
    reject_bh: bool
    reject_threshold: bool
    beta_hat: float = float('nan')
    name: Optional[str] = None


@dataclass
class InferenceReport:
    """逐坐标推断结果"""

    records: List[CoordinateRecord]
    alpha: float
    n: int
    p: int
    adjust: str = 'holm'
    metadata: dict = field(default_factory=dict)

    def rejected(self) -> List[int]:
        """按 adjust 指定的校正方法拒绝的坐标；none 时按原始 p 值"""
        if self.adjust == 'holm':
            return [r.j for r in self.records if r.reject_holm]
        if self.adjust == 'bh':
            return [r.j for r in self.records if r.reject_bh]
        return [r.j for r in self.records if r.p_value <= self.alpha]

    def selected(self) -> List[int]:
        """阈值规则选出的坐标"""
        return [r.j for r in self.records if r.reject_threshold]

    def to_frame(self) -> pd.DataFrame:
        columns = [f for f in CoordinateRecord.__dataclass_fields__]
        return pd.DataFrame([asdict(r) for r in self.records], columns=columns)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "n": self.n,
            "p": self.p,
            "adjust": self.adjust,
            "rejected": self.rejected(),
            "selected_threshold": self.selected(),
            "records": [asdict(r) for r in self.records],
            "metadata": self.metadata
        }


def build_report(
    ests: Sequence[DesparsifiedEstimate],
    alpha: float,
    adjust: str = 'holm',
    p_total: Optional[int] = None,
    feature_names: Optional[Sequence[str]] = None
) -> InferenceReport:
    """
    由去稀疏化估计构造推断报告

    Args:
        ests: 去稀疏化估计（按坐标排序）
        alpha: 显著性水平
        adjust: holm / bh / none，决定 rejected() 使用的校正
        p_total: 阈值规则中的 p（筛选前的变量数），默认为估计个数
        feature_names: 与坐标下标对应的变量名，可选

    Returns:
        InferenceReport
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha 必须位于 (0, 1)，实际 {alpha}")
    if adjust not in ADJUST_METHODS:
        raise ValueError(f"未知校正方法: {adjust}（可选 {', '.join(ADJUST_METHODS)}）")
    ests = list(ests)
    if not ests:
        return InferenceReport([], alpha, 0, p_total or 0, adjust)

    p_total = p_total or len(ests)
    raw = np.array([p_value(e) for e in ests])
    holm, bh, bonf = holm_adjust(raw), bh_adjust(raw), bonferroni_adjust(raw)
    selected = threshold_select(ests, p_total) if p_total >= 2 else set()

    records = []
    for k, est in enumerate(ests):
        lo, hi = confidence_interval(est, alpha)
        records.append(CoordinateRecord(
            j=est.j,
            b_hat=est.b_hat_j,
            sigma_hat=est.sigma_hat_j,
            ci_lo=lo,
            ci_hi=hi,
            p_value=float(raw[k]),
            p_holm=float(holm[k]),
            p_bh=float(bh[k]),
            p_bonferroni=float(bonf[k]),
            reject_holm=bool(holm[k] <= alpha),
            reject_bh=bool(bh[k] <= alpha),
            reject_threshold=est.j in selected,
            beta_hat=est.beta_hat_j,
            name=None if feature_names is None else feature_names[est.j]
        ))
    return InferenceReport(records, alpha, ests[0].n, p_total, adjust)

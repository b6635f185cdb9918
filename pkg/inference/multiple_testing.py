"""多重检验校正：Holm（控制 FWER）、Benjamini-Hochberg（控制 FDR）与 Bonferroni"""

import numpy as np
from statsmodels.stats.multitest import multipletests

ADJUST_METHODS = ('holm', 'bh', 'none')


def _validate(pvals) -> np.ndarray:
    pvals = np.asarray(pvals, dtype=float).ravel()
    if np.any(np.isnan(pvals)) or np.any((pvals < 0) | (pvals > 1)):
        raise ValueError("p 值必须位于 [0, 1]")
    return pvals


def holm_adjust(pvals) -> np.ndarray:
    """Holm 逐步下降校正：p̃₍ᵢ₎ = max_{k≤i} min(1, (m−k+1)p₍ₖ₎)"""
    pvals = _validate(pvals)
    if pvals.size == 0:
        return pvals
    return multipletests(pvals, method='holm')[1]


def bh_adjust(pvals) -> np.ndarray:
    """Benjamini-Hochberg 逐步上升校正：p̃₍ᵢ₎ = min_{k≥i} min(1, m·p₍ₖ₎/k)"""
    pvals = _validate(pvals)
    if pvals.size == 0:
        return pvals
    return multipletests(pvals, method='fdr_bh')[1]


def bonferroni_adjust(pvals) -> np.ndarray:
    """min(1, m·p)"""
    pvals = _validate(pvals)
    return np.minimum(1.0, pvals * pvals.size)


def adjust(pvals, method: str) -> np.ndarray:
    """按名称选择校正方法，none 返回原始 p 值"""
    if method == 'holm':
        return holm_adjust(pvals)
    if method == 'bh':
        return bh_adjust(pvals)
    if method == 'none':
        return _validate(pvals)
    raise ValueError(f"未知校正方法: {method}（可选 {', '.join(ADJUST_METHODS)}）")

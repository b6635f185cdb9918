"""标准化残差导出（直方图用）及其与标准正态的 KS 距离"""

from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats

Z_COLUMNS = ['j', 'replication', 'z', 'z_initial', 'ks_statistic', 'ks_pvalue']


def export_standardized(result, method: str = 'desparsified') -> pd.DataFrame:
    """
    展平的 (j, replication, z) 表

    z = √n(b̂ⱼ − βⱼ⁰)/σ̂ⱼ，z_initial 为初始估计 β̂ⱼ 按同一尺度标准化的值；
    每个 j 附带其 z 值与 N(0, 1) 的 Kolmogorov-Smirnov 距离。

    Args:
        result: ExperimentResult
        method: 记录中的方法名

    Returns:
        DataFrame，空结果返回带列名的空表
    """
    records = result.records
    frame = records[records['method'] == method] if len(records) else records
    if frame.empty:
        return pd.DataFrame(columns=Z_COLUMNS)

    out = pd.DataFrame({
        'j': frame['j'].to_numpy(),
        'replication': frame['replication'].to_numpy(),
        'z': frame['z'].to_numpy(dtype=float),
        'z_initial': ((frame['beta_hat'] - frame['beta0']) / frame['sigma_hat']
                      * np.sqrt(result.config['n'])).to_numpy(dtype=float)
    })
    ks = {j: stats.kstest(group['z'].to_numpy(), 'norm') for j, group in out.groupby('j')}
    out['ks_statistic'] = out['j'].map(lambda j: float(ks[j].statistic))
    out['ks_pvalue'] = out['j'].map(lambda j: float(ks[j].pvalue))
    return out.sort_values(['j', 'replication'], kind='stable').reset_index(drop=True)


def pooled_ks(z_table: pd.DataFrame, columns: Optional[Sequence[int]] = None):
    """
    合并若干坐标的 z 值后与 N(0, 1) 做 KS 检验

    Returns:
        scipy 的 KstestResult（statistic, pvalue）
    """
    frame = z_table if columns is None else z_table[z_table['j'].isin(list(columns))]
    return stats.kstest(frame['z'].to_numpy(dtype=float), 'norm')

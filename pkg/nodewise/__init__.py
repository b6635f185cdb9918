"""节点回归模块 - 加权节点 Lasso 估计精度矩阵的行及损失相关的标量修正"""

from nodewise.weights import WeightedDesign, build_weighted_design, default_weighting, WEIGHTINGS
from nodewise.regression import (
    PrecisionRow,
    nodewise_row,
    precision_rows,
    precision_estimate,
    universal_lambda,
    assemble_theta,
    extended_kkt_residual,
    TAU_SQ_FLOOR
)
from nodewise.correction import NoiseInfo, ERROR_DISTRIBUTIONS, correction_scale, loss_scale_correction

__all__ = [
    'WeightedDesign',
    'build_weighted_design',
    'default_weighting',
    'WEIGHTINGS',
    'PrecisionRow',
    'nodewise_row',
    'precision_rows',
    'precision_estimate',
    'universal_lambda',
    'assemble_theta',
    'extended_kkt_residual',
    'TAU_SQ_FLOOR',
    'NoiseInfo',
    'ERROR_DISTRIBUTIONS',
    'correction_scale',
    'loss_scale_correction'
]

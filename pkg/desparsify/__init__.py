"""去稀疏化模块 - 偏差修正估计量、代入式方差与 oracle 对照"""

from desparsify.estimator import (
    DesparsifiedEstimate,
    desparsify,
    estimate_variance,
    projected_variance
)
from desparsify.oracles import (
    true_precision_scale,
    oracle_theta,
    sigma_sq_quadratic,
    sigma_sq_lad,
    sigma_sq_huber
)

__all__ = [
    'DesparsifiedEstimate',
    'desparsify',
    'estimate_variance',
    'projected_variance',
    'true_precision_scale',
    'oracle_theta',
    'sigma_sq_quadratic',
    'sigma_sq_lad',
    'sigma_sq_huber'
]

"""模型核心模块 - 损失族、权重函数、得分矩阵与共享数据类型"""

from models.base import Dataset, Coefficients, ScoreMatrix
from models.losses import (
    LossSpec,
    QuadraticLoss,
    HuberLoss,
    QuantileLoss,
    LogisticLoss,
    LOSS_FAMILIES,
    make_loss,
    loss_from_dict,
    loss_value,
    weight,
    curvature_weight
)
from models.scores import score_matrix, objective_value
from models import errors

__all__ = [
    'Dataset',
    'Coefficients',
    'ScoreMatrix',
    'LossSpec',
    'QuadraticLoss',
    'HuberLoss',
    'QuantileLoss',
    'LogisticLoss',
    'LOSS_FAMILIES',
    'make_loss',
    'loss_from_dict',
    'loss_value',
    'weight',
    'curvature_weight',
    'score_matrix',
    'objective_value',
    'errors'
]

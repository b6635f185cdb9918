"""推断模块 - 置信区间、p 值、多重检验校正与阈值选择"""

from inference.intervals import (
    z_quantile,
    confidence_interval,
    p_value,
    interval_length,
    covers,
    two_sided_p
)
from inference.multiple_testing import holm_adjust, bh_adjust, bonferroni_adjust, adjust, ADJUST_METHODS
from inference.report import (
    CoordinateRecord,
    InferenceReport,
    build_report,
    threshold_select,
    threshold_level
)

__all__ = [
    'z_quantile',
    'confidence_interval',
    'p_value',
    'interval_length',
    'covers',
    'two_sided_p',
    'holm_adjust',
    'bh_adjust',
    'bonferroni_adjust',
    'adjust',
    'ADJUST_METHODS',
    'CoordinateRecord',
    'InferenceReport',
    'build_report',
    'threshold_select',
    'threshold_level'
]

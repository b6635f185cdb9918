"""异常定义

所有领域异常都继承自 DesparsifyError，CLI 据此统一映射退出码
"""

from typing import Optional

import numpy as np


class DesparsifyError(Exception):
    """领域异常基类"""


class DimensionMismatchError(DesparsifyError, ValueError):
    """维度不一致"""


class InvalidLossError(DesparsifyError, ValueError):
    """损失函数配置无效（K ≤ 0、q ∉ (0,1)、未知损失族等）"""


class InvalidDataError(DesparsifyError, ValueError):
    """数据无效（NaN/Inf、logistic 响应不在 {0,1} 等）"""


class ConvergenceError(DesparsifyError):
    """求解器在最大迭代次数内未收敛"""

    def __init__(
        self,
        message: str,
        last_iterate: Optional[np.ndarray] = None,
        residual: float = float('nan'),
        iterations: int = 0
    ):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual
        self.iterations = iterations


class DegenerateColumnError(DesparsifyError):
    """节点回归中 τ̂ⱼ² 过小：第 j 列在加权意义下落在其余列张成的空间内"""

    def __init__(self, j: int, tau_sq: float):
        super().__init__(f"第 {j} 列退化：tau_sq={tau_sq:.3e}")
        self.j = j
        self.tau_sq = tau_sq


class MissingNoiseInfoError(DesparsifyError, ValueError):
    """LAD/Huber 修正缺少噪声分布常数"""


class ZeroVarianceError(DesparsifyError):
    """方差估计为零"""


class DegenerateFoldsError(DesparsifyError):
    """交叉验证所有折都退化"""


class DataFormatError(DesparsifyError, ValueError):
    """输入文件格式错误，line 为出错的文件行号（从 1 开始，含表头）"""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message if line is None else f"第 {line} 行: {message}")
        self.line = line


class MissingPrecisionRowError(DesparsifyError, KeyError):
    """请求的坐标没有对应的精度矩阵行"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""

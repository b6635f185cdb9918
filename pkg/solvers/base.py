"""求解器基类和接口定义

定义 ℓ1 惩罚 M 估计量 argmin (1/n)Σρ(Xᵢᵀβ, yᵢ) + λ‖β‖₁ 的统一求解接口
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from config.settings import Settings
from models.base import Coefficients, Dataset
from models.errors import ConvergenceError, DimensionMismatchError
from models.losses import LossSpec, loss_from_dict
from models.scores import objective_value
from utils.helpers import log


@dataclass
class SolverOptions:
    """求解器选项，默认值来自 Settings"""

    tol: float = field(default_factory=lambda: Settings.TOL)
    max_iter: int = field(default_factory=lambda: Settings.MAX_ITER)
    cd_tol: float = field(default_factory=lambda: Settings.CD_TOL)
    tol_primal: float = field(default_factory=lambda: Settings.ADMM_TOL_PRIMAL)
    tol_dual: float = field(default_factory=lambda: Settings.ADMM_TOL_DUAL)
    standardize: bool = False
    intercept: bool = False
    polish: bool = True
    raise_on_nonconvergence: bool = True

    def __post_init__(self):
        if self.tol <= 0 or self.cd_tol <= 0 or self.tol_primal <= 0 or self.tol_dual <= 0:
            raise ValueError("求解器容差必须为正数")
        if self.max_iter < 1:
            raise ValueError("max_iter 至少为 1")

    def with_(self, **changes) -> 'SolverOptions':
        """返回修改了部分字段的副本"""
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "tol": self.tol,
            "max_iter": self.max_iter,
            "cd_tol": self.cd_tol,
            "tol_primal": self.tol_primal,
            "tol_dual": self.tol_dual,
            "standardize": self.standardize,
            "intercept": self.intercept,
            "polish": self.polish
        }


@dataclass
class PenalizedFit:
    """惩罚拟合结果"""

    beta: np.ndarray
    lam: float
    objective: float
    active_set: np.ndarray
    kkt_residual: float
    iterations: int
    loss: dict = field(default_factory=dict)
    intercept: Optional[float] = None
    penalty_factor: Optional[np.ndarray] = None
    objective_history: List[float] = field(default_factory=list)
    converged: bool = True

    @property
    def coefficients(self) -> Coefficients:
        return Coefficients(self.beta, self.intercept)

    @property
    def sparsity(self) -> int:
        """ŝ = |active_set|"""
        return int(len(self.active_set))

    def to_dict(self) -> dict:
        """转换为字典格式（JSON 输出用）"""
        return {
            "beta": self.beta.tolist(),
            "lambda": self.lam,
            "objective": self.objective,
            "active_set": [int(j) for j in self.active_set],
            "kkt_residual": self.kkt_residual,
            "iterations": self.iterations,
            "loss": self.loss,
            "intercept": self.intercept,
            "penalty_factor": None if self.penalty_factor is None else self.penalty_factor.tolist(),
            "objective_history": list(self.objective_history),
            "converged": self.converged
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'PenalizedFit':
        """从 to_dict() 的结果恢复"""
        pf = data.get("penalty_factor")
        return cls(
            beta=np.asarray(data["beta"], dtype=float),
            lam=float(data["lambda"]),
            objective=float(data["objective"]),
            active_set=np.asarray(data["active_set"], dtype=int),
            kkt_residual=float(data["kkt_residual"]),
            iterations=int(data["iterations"]),
            loss=dict(data.get("loss", {})),
            intercept=data.get("intercept"),
            penalty_factor=None if pf is None else np.asarray(pf, dtype=float),
            objective_history=list(data.get("objective_history", [])),
            converged=bool(data.get("converged", True))
        )

    def rescore(self, data: Dataset) -> float:
        """在给定数据上重新计算目标函数值"""
        spec = loss_from_dict(self.loss)
        return objective_value(spec, data, self.coefficients, self.lam, self.penalty_factor)

    def __repr__(self) -> str:
        return (f"PenalizedFit(lambda={self.lam:.4g}, s_hat={self.sparsity}, "
                f"objective={self.objective:.6g}, kkt={self.kkt_residual:.2e})")


@dataclass
class LambdaPath:
    """交叉验证的 λ 路径"""

    values: np.ndarray
    n_folds: int
    cv_errors: np.ndarray
    selected: int
    fold_errors: Optional[np.ndarray] = None
    skipped_folds: List[int] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("λ 路径不能为空")
        if np.any(self.values <= 0) or np.any(np.diff(self.values) >= 0):
            raise ValueError("λ 路径必须为严格递减的正数序列")
        if self.n_folds < 2:
            raise ValueError("n_folds 至少为 2")

    @property
    def selected_lambda(self) -> float:
        return float(self.values[self.selected])

    def to_dict(self) -> dict:
        return {
            "values": self.values.tolist(),
            "n_folds": self.n_folds,
            "cv_errors": self.cv_errors.tolist(),
            "selected": int(self.selected),
            "selected_lambda": self.selected_lambda,
            "skipped_folds": list(self.skipped_folds)
        }


def column_scales(X: np.ndarray, centered: bool) -> np.ndarray:
    """标准化尺度：使每列的经验范数 ‖Xⱼ‖²/n = 1（零列尺度取 1）"""
    Z = X - X.mean(axis=0) if centered else X
    scales = np.sqrt(np.mean(Z * Z, axis=0))
    scales[scales == 0] = 1.0
    return scales


class BaseSolver(ABC):
    """ℓ1 惩罚求解器抽象基类"""

    def __init__(self, spec: LossSpec, opts: Optional[SolverOptions] = None):
        """
        初始化求解器

        Args:
            spec: 损失族
            opts: 求解器选项
        """
        self.spec = spec
        self.opts = opts or SolverOptions()

    @abstractmethod
    def _solve(
        self,
        X: np.ndarray,
        y: np.ndarray,
        lam: float,
        init: Optional[Coefficients]
    ) -> Tuple[np.ndarray, Optional[float], List[float], int, bool]:
        """
        在（可能已标准化的）设计矩阵上求解

        Returns:
            (beta, intercept, objective_history, iterations, converged)
        """
        pass

    def fit(self, data: Dataset, lam: float, init: Optional[Coefficients] = None) -> PenalizedFit:
        """
        拟合 ℓ1 惩罚 M 估计量

        Args:
            data: 数据集
            lam: 惩罚参数 λ > 0
            init: 热启动初值（原始尺度）

        Returns:
            PenalizedFit
        """
        from solvers.kkt import kkt_residual

        if not lam > 0:
            raise ValueError(f"λ 必须为正数，实际 {lam}")
        data.validate_for(self.spec)
        if init is not None and init.p != data.p:
            raise DimensionMismatchError(f"初值长度 {init.p} 与数据列数 {data.p} 不一致")

        scales = None
        X = data.X
        if self.opts.standardize:
            scales = column_scales(X, centered=self.opts.intercept)
            X = X / scales
            if init is not None:
                init = Coefficients(init.beta * scales, init.intercept)

        beta, intercept, history, iterations, converged = self._solve(X, data.y, lam, init)
        if scales is not None:
            beta = beta / scales
        if not self.opts.intercept:
            intercept = None

        coefs = Coefficients(beta, intercept)
        objective = objective_value(self.spec, data, coefs, lam, scales)
        fit = PenalizedFit(
            beta=beta,
            lam=float(lam),
            objective=objective,
            active_set=np.flatnonzero(beta),
            kkt_residual=kkt_residual(self.spec, data, coefs, lam, scales),
            iterations=iterations,
            loss=self.spec.to_dict(),
            intercept=intercept,
            penalty_factor=scales,
            objective_history=history,
            converged=converged
        )
        if not converged:
            message = f"{iterations} 次迭代后未收敛（λ={lam:.4g}, KKT 残差 {fit.kkt_residual:.2e}）"
            if self.opts.raise_on_nonconvergence:
                raise ConvergenceError(message, last_iterate=beta, residual=fit.kkt_residual,
                                       iterations=iterations)
            self._log(message, "WARN")
        return fit

    def _objective(self, X: np.ndarray, y: np.ndarray, beta: np.ndarray,
                   intercept: Optional[float], lam: float) -> float:
        u = X @ beta
        if intercept is not None:
            u = u + intercept
        return float(np.mean(self.spec.rho(u, y))) + lam * float(np.sum(np.abs(beta)))

    def _log(self, message: str, level: str = "INFO") -> None:
        """日志输出"""
        log(message, level, self.__class__.__name__)

"""ℓ1 惩罚 M 估计的统一入口

按损失族选择求解器，计算 λ_max 与对数等距的 λ 路径，并沿路径热启动拟合
"""

from typing import List, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from config.settings import SOLVER_CONFIG, Settings
from models.base import Coefficients, Dataset
from models.losses import LossSpec
from solvers.admm import AdmmQuantileSolver
from solvers.base import BaseSolver, PenalizedFit, SolverOptions, column_scales
from solvers.coordinate_descent import CoordinateDescentSolver, MajorizeMinimizeSolver
from solvers.kkt import KINK_TOL

SOLVER_CLASSES = {
    'coordinate_descent': CoordinateDescentSolver,
    'majorize_minimize': MajorizeMinimizeSolver,
    'admm': AdmmQuantileSolver,
}


def make_solver(spec: LossSpec, opts: Optional[SolverOptions] = None) -> BaseSolver:
    """
    根据损失族创建求解器

    Args:
        spec: 损失族
        opts: 求解器选项

    Returns:
        BaseSolver 实例
    """
    opts = opts or SolverOptions()
    config = SOLVER_CONFIG[spec.family]
    if not config.get('polish', True):
        opts = opts.with_(polish=False)
    return SOLVER_CLASSES[config['method']](spec, opts)


def fit_lasso(
    spec: LossSpec,
    data: Dataset,
    lam: float,
    opts: Optional[SolverOptions] = None,
    init: Optional[Coefficients] = None
) -> PenalizedFit:
    """求解 argmin (1/n)Σρ(Xᵢᵀβ, yᵢ) + λ‖β‖₁"""
    return make_solver(spec, opts).fit(data, lam, init)


def null_intercept(spec: LossSpec, y: np.ndarray) -> float:
    """只含截距的模型的最优截距"""
    if spec.family == 'quadratic':
        return float(np.mean(y))
    if spec.family == 'logistic':
        ybar = float(np.clip(np.mean(y), 1e-12, 1 - 1e-12))
        return float(np.log(ybar / (1.0 - ybar)))
    if spec.family == 'quantile':
        return float(np.quantile(y, spec.q, method='inverted_cdf'))
    if np.ptp(y) == 0:
        return float(y[0])
    result = minimize_scalar(lambda b: float(np.mean(spec.rho(np.full_like(y, b), y))),
                             bracket=(float(np.min(y)), float(np.max(y))))
    return float(result.x)


def lambda_max(
    spec: LossSpec,
    data: Dataset,
    intercept: bool = False,
    penalty_factor: Optional[np.ndarray] = None
) -> float:
    """
    使 β̂ = 0 的最小 λ：‖Xᵀw(y, u⁰)/n ÷ c‖∞

    u⁰ 为 0 或只含截距的拟合值。分位数损失在拐点样本上的次梯度不唯一，
    这里按最坏情况加上拐点样本的贡献，保证 λ_max 处的解确实为 0。
    """
    u0 = np.full(data.n, null_intercept(spec, data.y) if intercept else 0.0)
    w = np.asarray(spec.weight(u0, data.y), dtype=float)
    X = data.X - data.X.mean(axis=0) if intercept else data.X
    g = np.abs(X.T @ w) / data.n
    if spec.family == 'quantile':
        kinks = np.abs(data.y - u0) <= KINK_TOL
        g = g + max(spec.q, 1.0 - spec.q) * np.abs(X[kinks]).sum(axis=0) / data.n
    if penalty_factor is not None:
        g = g / penalty_factor
    value = float(np.max(g))
    # 响应与所有列都正交时仍返回一个正的 λ
    return value if value > 0 else 1e-12


def lambda_path(
    spec: LossSpec,
    data: Dataset,
    path_len: Optional[int] = None,
    ratio: Optional[float] = None,
    opts: Optional[SolverOptions] = None
) -> np.ndarray:
    """
    从 λ_max 到 ratio·λ_max 的对数等距递减路径

    Args:
        path_len: 路径长度，默认 Settings.PATH_LEN
        ratio: 最小值与 λ_max 之比，默认 Settings.PATH_RATIO

    Returns:
        长度为 path_len 的严格递减数组
    """
    path_len = path_len or Settings.PATH_LEN
    ratio = ratio or Settings.PATH_RATIO
    opts = opts or SolverOptions()
    scales = column_scales(data.X, centered=opts.intercept) if opts.standardize else None
    top = lambda_max(spec, data, intercept=opts.intercept, penalty_factor=scales)
    if path_len == 1:
        return np.array([top])
    return np.geomspace(top, top * ratio, path_len)


def fit_path(
    spec: LossSpec,
    data: Dataset,
    values: np.ndarray,
    opts: Optional[SolverOptions] = None
) -> List[PenalizedFit]:
    """沿递减的 λ 路径依次拟合，每一步以前一步的解热启动"""
    solver = make_solver(spec, opts)
    fits: List[PenalizedFit] = []
    init = None
    for lam in values:
        fit = solver.fit(data, float(lam), init)
        fits.append(fit)
        init = fit.coefficients
    return fits

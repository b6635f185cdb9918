"""平方根 Lasso

min ‖t − Aγ‖₂/√n + 2λ‖γ‖₁，通过尺度化 Lasso 交替求解：
固定 σ 时求 (1/n)‖t − Aγ‖² + 4λσ‖γ‖₁，再更新 σ = ‖t − Aγ‖₂/√n。
不动点处两者的 KKT 条件一致：Aᵀr/n = 2λσ̂·sign(γ̂)。
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from models.errors import ConvergenceError
from solvers.base import SolverOptions
from solvers.coordinate_descent import solve_quadratic_lasso

# 残差尺度低于该值时视为精确插值
SIGMA_FLOOR = 1e-12


@dataclass
class SqrtLassoFit:
    """平方根 Lasso 拟合结果"""

    gamma: np.ndarray
    sigma: float
    lambda_effective: float
    degenerate: bool = False
    iterations: int = 0

    def objective(self, target: np.ndarray, others: np.ndarray, lam: float) -> float:
        resid = target - others @ self.gamma
        return float(np.linalg.norm(resid) / np.sqrt(target.shape[0]) + 2.0 * lam * np.sum(np.abs(self.gamma)))


def fit_sqrt_lasso(
    target: np.ndarray,
    others: np.ndarray,
    lam: float,
    opts: Optional[SolverOptions] = None
) -> SqrtLassoFit:
    """
    求解平方根 Lasso

    Args:
        target: 长度为 n 的目标列
        others: n × (p−1) 的其余列
        lam: 惩罚参数 λ > 0
        opts: 求解器选项（tol 作用于 σ 的相对变化）

    Returns:
        SqrtLassoFit；lambda_effective = 2λσ̂ 是与之等价的普通 Lasso 惩罚
        （对应目标 (1/n)‖r‖² + 2·lambda_effective·‖γ‖₁）
    """
    if not lam > 0:
        raise ValueError(f"λ 必须为正数，实际 {lam}")
    target = np.asarray(target, dtype=float)
    others = np.asarray(others, dtype=float).reshape(target.shape[0], -1)
    if not (np.all(np.isfinite(target)) and np.all(np.isfinite(others))):
        raise ValueError("平方根 Lasso 的输入包含 NaN 或 Inf")
    opts = opts or SolverOptions()
    n, k = others.shape
    root_n = np.sqrt(n)

    gamma = np.zeros(k)
    sigma = float(np.linalg.norm(target) / root_n)
    if k == 0 or sigma < SIGMA_FLOOR:
        return SqrtLassoFit(gamma, sigma, 2.0 * lam * sigma, degenerate=sigma < SIGMA_FLOOR)

    G = others.T @ others
    Xy = others.T @ target
    for iteration in range(1, opts.max_iter + 1):
        gamma, _, _ = solve_quadratic_lasso(
            others, target, 4.0 * lam * sigma, G=G, Xy=Xy, init=gamma,
            cd_tol=opts.cd_tol, max_iter=opts.max_iter, polish=opts.polish
        )
        sigma_new = float(np.linalg.norm(target - others @ gamma) / root_n)
        if sigma_new < SIGMA_FLOOR:
            return SqrtLassoFit(gamma, sigma_new, 2.0 * lam * sigma_new, degenerate=True, iterations=iteration)
        change = abs(sigma_new - sigma)
        sigma = sigma_new
        if change <= opts.tol * max(1.0, sigma):
            break
    else:
        if opts.raise_on_nonconvergence:
            raise ConvergenceError(f"平方根 Lasso 在 {opts.max_iter} 次交替后未收敛",
                                   last_iterate=gamma, residual=change, iterations=opts.max_iter)
    # 最后一次 σ 更新后重新求一次 γ，使 KKT 与记录的 σ̂ 精确对应
    gamma, _, _ = solve_quadratic_lasso(
        others, target, 4.0 * lam * sigma, G=G, Xy=Xy, init=gamma,
        cd_tol=opts.cd_tol, max_iter=opts.max_iter, polish=opts.polish
    )
    return SqrtLassoFit(gamma, sigma, 2.0 * lam * sigma, iterations=iteration)

"""坐标下降求解器

平方损失：循环坐标下降（软阈值精确更新，Gram 矩阵预计算）+ 活跃集抛光。
logistic / Huber：以常数曲率二次上界做 majorize-minimize 外循环，
每一步的内层问题是一个平方损失 Lasso。
"""

import warnings
from typing import List, Optional, Tuple

import numpy as np
from sklearn.exceptions import ConvergenceWarning
from sklearn.linear_model import lasso_path

from solvers.base import BaseSolver


def solve_quadratic_lasso(
    X: np.ndarray,
    y: np.ndarray,
    lam_q: float,
    G: Optional[np.ndarray] = None,
    Xy: Optional[np.ndarray] = None,
    init: Optional[np.ndarray] = None,
    cd_tol: float = 1e-12,
    max_iter: int = 100000,
    polish: bool = True
) -> Tuple[np.ndarray, int, bool]:
    """
    求解 min (1/n)‖y − Xβ‖² + lam_q·‖β‖₁

    scikit-learn 的目标是 (1/(2n))‖y − Xβ‖² + α‖β‖₁，故 α = lam_q / 2。

    Args:
        X, y: 设计矩阵与响应
        lam_q: 惩罚参数
        G, Xy: 预计算的 XᵀX 与 Xᵀy（未除以 n），可选
        init: 热启动初值
        cd_tol: 对偶间隙容差（相对 ‖y‖²）
        max_iter: 坐标下降最大轮数
        polish: 是否做活跃集抛光

    Returns:
        (beta, 迭代轮数, 是否收敛)
    """
    n, p = X.shape
    if p == 0:
        return np.zeros(0), 0, True
    if G is None:
        G = X.T @ X
    if Xy is None:
        Xy = X.T @ y
    coef_init = None if init is None else np.asarray(init, dtype=float).copy()

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        _, coefs, _, n_iters = lasso_path(
            X, y,
            alphas=[lam_q / 2.0],
            precompute=G,
            Xy=Xy,
            coef_init=coef_init,
            return_n_iter=True,
            tol=cd_tol,
            max_iter=max_iter
        )
    beta = np.asarray(coefs[:, 0], dtype=float)
    n_iter = int(n_iters[0])
    if polish:
        beta = polish_active_set(G, Xy, n, lam_q, beta)
    return beta, n_iter, n_iter < max_iter


def polish_active_set(G: np.ndarray, Xy: np.ndarray, n: int, lam_q: float, beta: np.ndarray) -> np.ndarray:
    """
    在活跃集上精确求解 KKT 线性方程组 G_AA β_A = (Xy)_A − (nλ/2)·sign(β_A)

    只有当符号不变且非活跃坐标满足 |(2/n)(Xy − Gβ)ⱼ| ≤ λ 时才接受抛光结果。
    """
    active = np.flatnonzero(beta)
    if active.size == 0 or active.size > n:
        return beta
    signs = np.sign(beta[active])
    try:
        beta_active = np.linalg.solve(G[np.ix_(active, active)], Xy[active] - 0.5 * n * lam_q * signs)
    except np.linalg.LinAlgError:
        return beta
    if np.any(np.sign(beta_active) != signs):
        return beta
    candidate = np.zeros_like(beta)
    candidate[active] = beta_active
    grad = 2.0 * (Xy - G @ candidate) / n
    inactive = np.ones(beta.shape[0], dtype=bool)
    inactive[active] = False
    if np.any(np.abs(grad[inactive]) > lam_q * (1.0 + 1e-9) + 1e-14):
        return beta
    return candidate


class CoordinateDescentSolver(BaseSolver):
    """平方损失的循环坐标下降求解器"""

    def _solve(self, X, y, lam, init):
        opts = self.opts
        beta0 = None if init is None else init.beta
        if opts.intercept:
            x_mean, y_mean = X.mean(axis=0), float(y.mean())
            Xc, yc = X - x_mean, y - y_mean
        else:
            Xc, yc = X, y
        beta, n_iter, converged = solve_quadratic_lasso(
            Xc, yc, lam, init=beta0, cd_tol=opts.cd_tol, max_iter=opts.max_iter, polish=opts.polish
        )
        intercept = y_mean - float(x_mean @ beta) if opts.intercept else None
        history = [self._objective(X, y, beta, intercept, lam)]
        return beta, intercept, history, n_iter, converged


class MajorizeMinimizeSolver(BaseSolver):
    """
    logistic / Huber 损失的 majorize-minimize 求解器

    w 关于 u 是 L-Lipschitz 的（logistic L = 1/4，Huber L = 1/K），因此
    ρ(u) ≤ ρ(u⁰) + w⁰(u − u⁰) + (L/2)(u − u⁰)²。
    上界的最小化是工作响应 z = u⁰ − w⁰/L 上的平方损失 Lasso，惩罚参数 2λ/L。
    """

    def _initial_intercept(self, y: np.ndarray) -> float:
        if self.spec.family == 'logistic':
            ybar = float(np.clip(y.mean(), 1e-6, 1 - 1e-6))
            return float(np.log(ybar / (1.0 - ybar)))
        return float(np.median(y))

    def _solve(self, X, y, lam, init):
        opts = self.opts
        L = self.spec.majorizer
        p = X.shape[1]
        beta = np.zeros(p) if init is None else init.beta.copy()
        intercept = None
        if opts.intercept:
            intercept = init.intercept if init is not None and init.intercept is not None \
                else self._initial_intercept(y)
            x_mean = X.mean(axis=0)
            Xc = X - x_mean
        else:
            Xc = X
        G = Xc.T @ Xc
        lam_q = 2.0 * lam / L

        history: List[float] = [self._objective(X, y, beta, intercept, lam)]
        converged = False
        iteration = 0
        for iteration in range(1, opts.max_iter + 1):
            u = X @ beta
            if intercept is not None:
                u = u + intercept
            z = u - np.asarray(self.spec.weight(u, y), dtype=float) / L
            if opts.intercept:
                z_mean = float(z.mean())
                zc = z - z_mean
            else:
                zc = z
            beta_new, _, _ = solve_quadratic_lasso(
                Xc, zc, lam_q, G=G, init=beta, cd_tol=opts.cd_tol,
                max_iter=opts.max_iter, polish=opts.polish
            )
            change = float(np.max(np.abs(beta_new - beta), initial=0.0))
            beta = beta_new
            if opts.intercept:
                intercept_new = z_mean - float(x_mean @ beta)
                change = max(change, abs(intercept_new - intercept))
                intercept = intercept_new
            history.append(self._objective(X, y, beta, intercept, lam))
            if change < opts.tol:
                converged = True
                break
        if not converged:
            self._log(f"外循环 {iteration} 次后变化量仍高于 {opts.tol:g}", "WARN")
        return beta, intercept, history, iteration, converged

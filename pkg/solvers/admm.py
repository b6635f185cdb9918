"""分位数损失的 ADMM 求解器

引入残差变量 r = y − Xβ 和系数副本 z = β：

    min (1/n)Σρ_q(rᵢ) + λ‖z‖₁   s.t.  Xβ + r = y,  β − z = 0

β 步是固定的线性方程组 (XᵀX + I)β = ·（Cholesky 分解只做一次），
r 步是 check 损失的闭式近端映射，z 步是软阈值；对偶变量做缩放形式的上升。
惩罚参数按原始/对偶残差比例自适应调整，调整次数有上限，之后 σ 固定。

check 损失加 ℓ1 惩罚是线性规划，polish 开启时用 HiGHS 求精确解作为收尾：

    min Σ cⱼ(b⁺ⱼ + b⁻ⱼ) + (1/n)Σ(q·e⁺ᵢ + (1−q)·e⁻ᵢ)
    s.t. X(b⁺ − b⁻) + e⁺ − e⁻ = y,  b±, e± ≥ 0
"""

from typing import List, Optional

import numpy as np
from scipy import sparse
from scipy.linalg import cho_factor, cho_solve
from scipy.optimize import linprog

from config.settings import SOLVER_CONFIG
from solvers.base import BaseSolver


def soft_threshold(x: np.ndarray, t: np.ndarray) -> np.ndarray:
    """软阈值 S(x, t)"""
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def solve_quantile_lp(X: np.ndarray, y: np.ndarray, q: float, penalty: np.ndarray,
                      tol: float = 1e-10) -> Optional[np.ndarray]:
    """
    以线性规划精确求解 (1/n)Σρ_q(yᵢ − Xᵢᵀb) + Σ penaltyⱼ|bⱼ|

    Args:
        X: 设计矩阵（截距列已并入，对应 penalty 为 0）
        y: 响应
        q: 分位数水平
        penalty: 各系数的惩罚权重
        tol: HiGHS 原始/对偶可行性容差

    Returns:
        最优系数；HiGHS 未报告最优时返回 None
    """
    n, m = X.shape
    cost = np.concatenate([penalty, penalty, np.full(n, q / n), np.full(n, (1.0 - q) / n)])
    Xs = sparse.csr_matrix(X)
    eye = sparse.identity(n, format='csr')
    A_eq = sparse.hstack([Xs, -Xs, eye, -eye], format='csr')
    res = linprog(cost, A_eq=A_eq, b_eq=y, bounds=(0, None), method='highs',
                  options={'primal_feasibility_tolerance': tol, 'dual_feasibility_tolerance': tol})
    if res.status != 0:
        return None
    return res.x[:m] - res.x[m:2 * m]


class AdmmQuantileSolver(BaseSolver):
    """check 损失 ℓ1 惩罚回归的算子分裂求解器"""

    def _solve(self, X, y, lam, init):
        opts = self.opts
        config = SOLVER_CONFIG['quantile']
        n, p = X.shape
        if opts.intercept:
            X = np.hstack([X, np.ones((n, 1))])
        m = X.shape[1]

        penalty = np.full(m, lam)
        if opts.intercept:
            penalty[-1] = 0.0

        chol = cho_factor(X.T @ X + np.eye(m), lower=False, check_finite=False)
        sigma = float(config['rho'])
        factor = float(config['rho_factor'])
        gap = float(config['residual_gap'])
        rebalances_left = int(config['max_rebalances'])

        beta = np.zeros(m)
        if init is not None:
            beta[:p] = init.beta
            if opts.intercept and init.intercept is not None:
                beta[-1] = init.intercept
        z = beta.copy()
        r = y - X @ beta
        u = np.zeros(n)
        v = np.zeros(m)
        y_norm = float(np.linalg.norm(y))

        budget = min(opts.max_iter, int(config['warmup_iter'])) if opts.polish else opts.max_iter
        history: List[float] = [self._objective_aug(X, y, z, penalty)]
        converged = False
        iteration = 0
        for iteration in range(1, budget + 1):
            beta = cho_solve(chol, X.T @ (y - r - u) + (z - v), check_finite=False)
            Xb = X @ beta
            r_old, z_old = r, z
            r = self.spec.prox(y - Xb - u, 1.0 / (n * sigma))
            z = soft_threshold(beta + v, penalty / sigma)
            res_fit = Xb + r - y
            res_copy = beta - z
            u = u + res_fit
            v = v + res_copy

            primal = np.sqrt(res_fit @ res_fit + res_copy @ res_copy)
            dual = sigma * np.linalg.norm(X.T @ (r - r_old) - (z - z_old))
            eps_primal = opts.tol_primal * (1.0 + max(np.linalg.norm(Xb), np.linalg.norm(r), y_norm))
            eps_dual = opts.tol_dual * (1.0 + sigma * np.linalg.norm(X.T @ u + v))
            if iteration % 50 == 0 or primal <= eps_primal:
                history.append(self._objective_aug(X, y, z, penalty))
            if primal <= eps_primal and dual <= eps_dual:
                converged = True
                break

            # 残差平衡：缩放形式的对偶变量随 σ 反向缩放
            if rebalances_left > 0:
                if primal > gap * dual:
                    sigma *= factor
                    u, v = u / factor, v / factor
                    rebalances_left -= 1
                elif dual > gap * primal:
                    sigma /= factor
                    u, v = u * factor, v * factor
                    rebalances_left -= 1

        history.append(self._objective_aug(X, y, z, penalty))

        if opts.polish:
            exact = solve_quantile_lp(X, y, self.spec.q, penalty)
            if exact is None:
                self._log("线性规划收尾未得到最优解，保留 ADMM 迭代结果", "WARN")
            else:
                z = np.where(np.abs(exact) > opts.cd_tol, exact, 0.0)
                if opts.intercept:
                    z[-1] = exact[-1]
                history.append(self._objective_aug(X, y, z, penalty))
                converged = True

        intercept = float(z[-1]) if opts.intercept else None
        return z[:p].copy(), intercept, history, iteration, converged

    def _objective_aug(self, X: np.ndarray, y: np.ndarray, coef: np.ndarray, penalty: np.ndarray) -> float:
        return float(np.mean(self.spec.rho(X @ coef, y))) + float(penalty @ np.abs(coef))

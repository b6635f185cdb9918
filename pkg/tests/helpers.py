"""测试辅助：随机小实例、精确 oracle"""

import numpy as np
from scipy.optimize import linprog, minimize

from models.base import Dataset


def make_data(family: str, n: int, p: int, seed: int, beta=None) -> Dataset:
    """小规模随机实例：线性模型加高斯噪声，logistic 为伯努利响应"""
    r = np.random.default_rng(seed)
    X = r.standard_normal((n, p))
    if beta is None:
        beta = np.zeros(p)
        beta[0] = 1.0
        if p > 1:
            beta[1] = -0.5
    eta = X @ np.asarray(beta, dtype=float)
    if family == 'logistic':
        y = (r.random(n) < 1.0 / (1.0 + np.exp(-eta))).astype(float)
    else:
        y = eta + r.standard_normal(n)
    return Dataset(X, y)


def exact_minimum(spec, data: Dataset, lam: float) -> float:
    """
    (1/n)Σρ + λ‖β‖₁ 的最小值

    分位数损失写成稠密线性规划；光滑损失在 β = b⁺ − b⁻ 上做带非负约束的 L-BFGS-B
    """
    n, p = data.X.shape
    if spec.family == 'quantile':
        cost = np.concatenate([np.full(2 * p, lam), np.full(n, spec.q / n), np.full(n, (1.0 - spec.q) / n)])
        A_eq = np.hstack([data.X, -data.X, np.eye(n), -np.eye(n)])
        res = linprog(cost, A_eq=A_eq, b_eq=data.y, bounds=(0, None), method='highs')
        assert res.status == 0
        return float(res.fun)

    def objective(v):
        u = data.X @ (v[:p] - v[p:])
        g = data.X.T @ spec.weight(u, data.y) / n
        value = float(np.mean(spec.rho(u, data.y))) + lam * float(v.sum())
        return value, np.concatenate([g + lam, lam - g])

    res = minimize(objective, np.zeros(2 * p), jac=True, method='L-BFGS-B', bounds=[(0, None)] * (2 * p),
                   options={'ftol': 1e-15, 'gtol': 1e-12, 'maxiter': 10000})
    return float(res.fun)

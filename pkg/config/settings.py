"""配置管理模块

负责加载和管理所有环境变量配置，以及求解器、实验协议的默认参数
"""

import os
from typing import Dict
from dotenv import load_dotenv

# 加载环境变量
load_dotenv()

SPEC_VERSION = "1.0"


def _env_float(name: str, default: float) -> float:
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


def _env_bool(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value in (None, ""):
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


class Settings:
    """应用配置类"""

    # 求解器配置
    TOL: float = _env_float('DESPARSIFY_TOL', 1e-8)
    MAX_ITER: int = _env_int('DESPARSIFY_MAX_ITER', 100000)
    CD_TOL: float = _env_float('DESPARSIFY_CD_TOL', 1e-12)
    ADMM_TOL_PRIMAL: float = _env_float('DESPARSIFY_ADMM_TOL_PRIMAL', 1e-7)
    ADMM_TOL_DUAL: float = _env_float('DESPARSIFY_ADMM_TOL_DUAL', 1e-7)

    # 交叉验证与 λ 路径
    FOLDS: int = _env_int('DESPARSIFY_FOLDS', 10)
    PATH_LEN: int = _env_int('DESPARSIFY_PATH_LEN', 50)
    PATH_RATIO: float = _env_float('DESPARSIFY_PATH_RATIO', 0.01)

    # 节点回归：平方根 Lasso 的通用 λ = c·sqrt(log p / n)
    SQRT_C: float = _env_float('DESPARSIFY_SQRT_C', 1.0)

    # 推断配置
    ALPHA: float = _env_float('DESPARSIFY_ALPHA', 0.05)

    # 运行配置
    SEED: int = _env_int('DESPARSIFY_SEED', 7)
    THREADS: int = _env_int('DESPARSIFY_THREADS', 0)
    VERBOSE: bool = _env_bool('DESPARSIFY_VERBOSE', True)
    OUT_DIR: str = os.getenv('DESPARSIFY_OUT', 'results')

    @classmethod
    def validate(cls) -> None:
        """验证配置项的取值范围"""
        if cls.TOL <= 0 or cls.CD_TOL <= 0:
            raise ValueError("DESPARSIFY_TOL 与 DESPARSIFY_CD_TOL 必须为正数")
        if cls.ADMM_TOL_PRIMAL <= 0 or cls.ADMM_TOL_DUAL <= 0:
            raise ValueError("ADMM 容差必须为正数")
        if cls.MAX_ITER < 1:
            raise ValueError("DESPARSIFY_MAX_ITER 至少为 1")
        if cls.FOLDS < 2:
            raise ValueError("DESPARSIFY_FOLDS 至少为 2")
        if cls.PATH_LEN < 1 or not 0 < cls.PATH_RATIO < 1:
            raise ValueError("λ 路径配置无效：PATH_LEN ≥ 1 且 0 < PATH_RATIO < 1")
        if cls.SQRT_C <= 0:
            raise ValueError("DESPARSIFY_SQRT_C 必须为正数")
        if not 0 < cls.ALPHA < 1:
            raise ValueError("DESPARSIFY_ALPHA 必须位于 (0, 1)")
        if cls.THREADS < 0:
            raise ValueError("DESPARSIFY_THREADS 不能为负数（0 表示使用全部核心）")


# 求解器配置（按损失族）
SOLVER_CONFIG: Dict[str, Dict] = {
    'quadratic': {
        'method': 'coordinate_descent',
        'polish': True,
    },
    'logistic': {
        'method': 'majorize_minimize',
        'polish': False,
    },
    'huber': {
        'method': 'majorize_minimize',
        'polish': False,
    },
    'quantile': {
        'method': 'admm',
        'rho': 1.0,
        'rho_factor': 2.0,
        'residual_gap': 10.0,
        'max_rebalances': 50,
        # 线性规划收尾开启时 ADMM 只作预热
        'warmup_iter': 2000,
        'polish': True,
    },
}

# 模拟实验协议预设
EXPERIMENT_CONFIG: Dict[str, Dict] = {
    'robust_gaussian': {
        'n': 500, 'p': 100, 's0': 3, 'error_dist': 'gaussian', 'reps': 100,
        'losses': ['quadratic', 'quantile', 'huber'], 'huber_k': 0.5,
    },
    'robust_t3': {
        'n': 500, 'p': 100, 's0': 3, 'error_dist': 't3', 'reps': 100,
        'losses': ['quadratic', 'quantile', 'huber'], 'huber_k': 0.5,
    },
    'robust_t5': {
        'n': 500, 'p': 100, 's0': 3, 'error_dist': 't5', 'reps': 100,
        'losses': ['quadratic', 'quantile', 'huber'], 'huber_k': 0.5,
    },
    'logistic_ci': {
        'n': 400, 'p': 100, 's0': 3, 'error_dist': 'logistic_bernoulli', 'reps': 100,
        'losses': ['logistic'], 'compare_mle': True,
    },
    'logistic_ci_n800': {
        'n': 800, 'p': 100, 's0': 3, 'error_dist': 'logistic_bernoulli', 'reps': 100,
        'losses': ['logistic'], 'compare_mle': True,
    },
    'fwer_logistic': {
        'n': 400, 'p': 100, 's0': 3, 'error_dist': 'logistic_bernoulli', 'reps': 200,
        'losses': ['logistic'], 'adjust': 'holm',
    },
}

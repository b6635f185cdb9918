"""求解器模块 - ℓ1 惩罚 M 估计、平方根 Lasso 与交叉验证"""

from solvers.base import BaseSolver, SolverOptions, PenalizedFit, LambdaPath, column_scales
from solvers.coordinate_descent import CoordinateDescentSolver, MajorizeMinimizeSolver, solve_quadratic_lasso
from solvers.admm import AdmmQuantileSolver
from solvers.lasso import make_solver, fit_lasso, lambda_max, lambda_path, fit_path, null_intercept
from solvers.sqrt_lasso import SqrtLassoFit, fit_sqrt_lasso
from solvers.cross_validation import cv_select_lambda
from solvers.kkt import kkt_residual, kkt_check, quantile_kkt_bound

__all__ = [
    'BaseSolver',
    'SolverOptions',
    'PenalizedFit',
    'LambdaPath',
    'column_scales',
    'CoordinateDescentSolver',
    'MajorizeMinimizeSolver',
    'solve_quadratic_lasso',
    'AdmmQuantileSolver',
    'make_solver',
    'fit_lasso',
    'lambda_max',
    'lambda_path',
    'fit_path',
    'null_intercept',
    'SqrtLassoFit',
    'fit_sqrt_lasso',
    'cv_select_lambda',
    'kkt_residual',
    'kkt_check',
    'quantile_kkt_bound'
]

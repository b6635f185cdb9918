"""K 折交叉验证选择 λ"""

from typing import List, Optional

import numpy as np
from joblib import Parallel, delayed
from sklearn.model_selection import KFold

from config.settings import Settings
from models.base import Dataset
from models.errors import DegenerateFoldsError
from models.losses import LossSpec
from solvers.base import LambdaPath, SolverOptions
from solvers.lasso import fit_path, lambda_path
from utils.helpers import log


def _fold_errors(
    spec: LossSpec,
    data: Dataset,
    train: np.ndarray,
    test: np.ndarray,
    values: np.ndarray,
    opts: SolverOptions
) -> Optional[np.ndarray]:
    """在一折上沿路径拟合，返回每个 λ 的平均留出损失；退化折返回 None"""
    train_data = data.subset(train)
    if spec.family == 'logistic' and np.unique(train_data.y).size < 2:
        return None
    fits = fit_path(spec, train_data, values, opts)
    X_test, y_test = data.X[test], data.y[test]
    return np.array([
        float(np.mean(spec.rho(fit.coefficients.linear_predictor(X_test), y_test)))
        for fit in fits
    ])


def cv_select_lambda(
    spec: LossSpec,
    data: Dataset,
    n_folds: Optional[int] = None,
    path_len: Optional[int] = None,
    ratio: Optional[float] = None,
    seed: Optional[int] = None,
    opts: Optional[SolverOptions] = None,
    n_jobs: int = 1,
    values: Optional[np.ndarray] = None
) -> LambdaPath:
    """
    交叉验证选择 λ

    cv_errors[k] 为各折在 λₖ 处留出样本上平均损失的均值，取最小者，
    并列时取较大的 λ（路径递减，argmin 返回第一个）。

    Args:
        spec: 损失族
        data: 数据集
        n_folds: 折数，默认 Settings.FOLDS
        path_len, ratio: λ 路径配置（values 给定时忽略）
        seed: 折划分的随机种子，默认 Settings.SEED
        opts: 求解器选项；折内拟合不因未收敛而中断
        n_jobs: 并行折数
        values: 显式给定的 λ 路径

    Returns:
        LambdaPath
    """
    n_folds = n_folds or Settings.FOLDS
    seed = Settings.SEED if seed is None else seed
    opts = (opts or SolverOptions()).with_(raise_on_nonconvergence=False)
    if n_folds < 2:
        raise ValueError("n_folds 至少为 2")
    if data.n < 2 * n_folds:
        raise ValueError(f"样本量 {data.n} 不足以做 {n_folds} 折交叉验证（需要 n ≥ {2 * n_folds}）")
    data.validate_for(spec)

    if values is None:
        values = lambda_path(spec, data, path_len, ratio, opts)
    values = np.asarray(values, dtype=float)

    folds = list(KFold(n_splits=n_folds, shuffle=True, random_state=seed).split(data.X))
    results: List[Optional[np.ndarray]] = Parallel(n_jobs=n_jobs)(
        delayed(_fold_errors)(spec, data, train, test, values, opts) for train, test in folds
    )

    skipped = [k for k, errors in enumerate(results) if errors is None]
    for k in skipped:
        log(f"第 {k + 1} 折训练集只含一类响应，已跳过", "WARN", "cv_select_lambda")
    kept = [errors for errors in results if errors is not None]
    if not kept:
        raise DegenerateFoldsError(f"{n_folds} 折全部退化，无法交叉验证")

    fold_errors = np.vstack(kept)
    cv_errors = fold_errors.mean(axis=0)
    selected = int(np.argmin(cv_errors))
    return LambdaPath(
        values=values,
        n_folds=n_folds,
        cv_errors=cv_errors,
        selected=selected,
        fold_errors=fold_errors,
        skipped_folds=skipped
    )

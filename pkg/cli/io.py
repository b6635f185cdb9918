"""CSV 输入

首行为表头，逗号分隔，不允许缺失值；出错时报告文件行号（表头为第 1 行）
"""

import re

import numpy as np
import pandas as pd

from models.base import Dataset
from models.errors import DataFormatError

_LINE_PATTERN = re.compile(r"line (\d+)")


def resolve_response(columns, response_col: str) -> str:
    """按名称或从 0 开始的下标确定响应列"""
    if response_col in columns:
        return response_col
    try:
        index = int(response_col)
    except ValueError:
        raise DataFormatError(f"找不到响应列 {response_col}", line=1)
    if not 0 <= index < len(columns):
        raise DataFormatError(f"响应列下标 {index} 超出范围（共 {len(columns)} 列）", line=1)
    return columns[index]


def load_csv(path: str, response_col: str) -> Dataset:
    """
    读取 CSV 为 Dataset

    Args:
        path: 文件路径
        response_col: 响应列的名称或下标

    Returns:
        Dataset，feature_names 为其余列的表头
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise DataFormatError("文件为空", line=1)
    except pd.errors.ParserError as e:
        match = _LINE_PATTERN.search(str(e))
        raise DataFormatError(f"字段数与表头不一致: {e}", line=int(match.group(1)) if match else None)

    if frame.empty:
        raise DataFormatError("没有数据行", line=2)
    response = resolve_response(list(frame.columns), response_col)
    if frame.shape[1] < 2:
        raise DataFormatError("除响应列外至少需要一列协变量", line=1)

    numeric = frame.apply(lambda col: pd.to_numeric(col.str.strip(), errors='coerce'))
    bad = numeric.isna().to_numpy() | ~np.isfinite(numeric.to_numpy(dtype=float))
    if bad.any():
        row, col = np.argwhere(bad)[0]
        value = frame.iat[row, col]
        missing = not isinstance(value, str) or value.strip() == ""
        what = "缺失值" if missing else f"非数值 '{value}'"
        raise DataFormatError(f"列 {frame.columns[col]} 含{what}", line=int(row) + 2)

    features = [c for c in frame.columns if c != response]
    return Dataset(numeric[features].to_numpy(dtype=float), numeric[response].to_numpy(dtype=float),
                   feature_names=[str(c) for c in features])

"""辅助工具模块

提供日志输出、并行度解析和结果序列化的通用函数
"""

import math
import os
from typing import Any, Optional

import numpy as np

from config.settings import Settings

LOG_PREFIX = {
    "INFO": "✓",
    "WARN": "⚠",
    "ERROR": "✗"
}


def log(message: str, level: str = "INFO", source: Optional[str] = None) -> None:
    """
    日志输出

    INFO 级别受 Settings.VERBOSE 控制，WARN/ERROR 总是输出。

    Args:
        message: 日志内容
        level: INFO / WARN / ERROR
        source: 来源名称（类名或模块名），可选
    """
    if level == "INFO" and not Settings.VERBOSE:
        return
    prefix = LOG_PREFIX.get(level, '→')
    if source:
        print(f"{prefix} {source}: {message}")
    else:
        print(f"{prefix} {message}")


def progress(current: int, total: int, what: str) -> None:
    """打印进度行"""
    if Settings.VERBOSE:
        print(f"[进度] 处理第 {current}/{total} {what}...")


def resolve_n_jobs(threads: Optional[int]) -> int:
    """
    将 --threads 取值解析为 joblib 的 n_jobs

    Args:
        threads: None 或 0 表示使用全部可用核心

    Returns:
        正整数工作进程数
    """
    if threads is None:
        threads = Settings.THREADS
    if threads <= 0:
        return max(1, os.cpu_count() or 1)
    return threads


def to_jsonable(value: Any) -> Any:
    """把 numpy 标量/数组和 NaN 转换为可 JSON 序列化的 Python 对象"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return None if math.isnan(value) else value
    if isinstance(value, np.bool_):
        return bool(value)
    return value

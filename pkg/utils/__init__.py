"""工具模块 - 提供通用辅助函数"""

from utils.helpers import log, progress, resolve_n_jobs, to_jsonable

__all__ = [
    'log',
    'progress',
    'resolve_n_jobs',
    'to_jsonable'
]

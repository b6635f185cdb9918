"""格式化器模块 - 负责将拟合、推断与实验结果写成 JSON / CSV / Markdown 文件"""

from .base import BaseFormatter
from .json_formatter import JsonFormatter
from .csv_formatter import CsvFormatter, FLOAT_FORMAT
from .markdown import MarkdownFormatter

__all__ = [
    'BaseFormatter',
    'JsonFormatter',
    'CsvFormatter',
    'FLOAT_FORMAT',
    'MarkdownFormatter'
]

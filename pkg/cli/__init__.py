"""命令行模块 - 参数解析、CSV 输入、边际筛选与子命令执行"""

from .config import RunConfig, build_parser, parse_args
from .io import load_csv
from .screening import ScreenResult, screen
from .commands import CommandRunner, run, main

__all__ = [
    'RunConfig',
    'build_parser',
    'parse_args',
    'load_csv',
    'ScreenResult',
    'screen',
    'CommandRunner',
    'run',
    'main'
]

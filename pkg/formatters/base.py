"""格式化器抽象基类"""

import os
from abc import ABC, abstractmethod
from typing import Dict, List

from utils.helpers import log


class BaseFormatter(ABC):
    """结果格式化器基类"""

    @abstractmethod
    def format_report(self, rows: List[Dict], metadata: Dict = None) -> str:
        """
        格式化完整的结果文件

        Args:
            rows: 记录列表（每条为一个字典）
            metadata: 元数据（配置、种子、版本等）

        Returns:
            格式化后的文本
        """
        pass

    @abstractmethod
    def format_row(self, row: Dict) -> str:
        """
        格式化单条记录

        Args:
            row: 记录字典

        Returns:
            格式化后的记录
        """
        pass

    def write(self, path: str, rows: List[Dict], metadata: Dict = None) -> str:
        """
        格式化并写入文件

        Returns:
            写入的文件路径
        """
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(self.format_report(rows, metadata))
        log(f"已写入 {path}", "INFO", self.__class__.__name__)
        return path

"""JSON 格式化器 - results.json 等汇总文件"""

import json
from typing import Dict, List

from config.settings import SPEC_VERSION
from utils.helpers import to_jsonable

from .base import BaseFormatter


class JsonFormatter(BaseFormatter):
    """JSON 格式化器：元数据展开在顶层，记录放在 records 下，浮点数按最短可往返表示输出"""

    def __init__(self, indent: int = 2):
        self.indent = indent

    def format_report(self, rows: List[Dict], metadata: Dict = None) -> str:
        payload = {"spec_version": SPEC_VERSION}
        payload.update(metadata or {})
        if rows:
            payload["records"] = rows
        return json.dumps(to_jsonable(payload), ensure_ascii=False, indent=self.indent, allow_nan=False) + "\n"

    def format_row(self, row: Dict) -> str:
        return json.dumps(to_jsonable(row), ensure_ascii=False, allow_nan=False)

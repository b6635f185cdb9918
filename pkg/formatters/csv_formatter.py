"""CSV 格式化器 - records.csv / report.csv / zvalues.csv"""

from typing import Dict, List, Optional, Sequence

import pandas as pd

from .base import BaseFormatter

FLOAT_FORMAT = '%.17g'


class CsvFormatter(BaseFormatter):
    """CSV 格式化器：首行表头，浮点数保留 17 位有效数字"""

    def __init__(self, columns: Optional[Sequence[str]] = None):
        self.columns = list(columns) if columns is not None else None

    def format_frame(self, frame: pd.DataFrame) -> str:
        if self.columns is not None:
            frame = frame.reindex(columns=self.columns)
        return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')

    def format_report(self, rows: List[Dict], metadata: Dict = None) -> str:
        return self.format_frame(pd.DataFrame(rows, columns=self.columns))

    def format_row(self, row: Dict) -> str:
        text = self.format_frame(pd.DataFrame([row], columns=self.columns))
        return text.splitlines()[1]

"""Markdown 格式化器 - 生成 report.md 摘要"""

import datetime
import math
from typing import Dict, List

from .base import BaseFormatter


def _fmt(value, digits: int = 3) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "–"
    return f"{value:.{digits}f}"


class MarkdownFormatter(BaseFormatter):
    """
    Markdown 格式化器

    metadata['kind'] 为 experiment 时输出覆盖率/长度表（S₀ 与 S₀ᶜ 分列），
    style 为 percent 时以百分数保留 2 位小数，为 proportion 时以比例保留 3 位小数；
    为 inference 时输出逐坐标推断表。
    """

    def __init__(self, style: str = 'percent'):
        if style not in ('percent', 'proportion'):
            raise ValueError(f"未知表格风格: {style}")
        self.style = style

    def format_report(self, rows: List[Dict], metadata: Dict = None) -> str:
        metadata = metadata or {}
        date = metadata.get('date', datetime.date.today())
        kind = metadata.get('kind', 'experiment')

        report = f"# {metadata.get('title', '去稀疏化推断结果')} ({date})\n\n"
        config = metadata.get('config')
        if config:
            settings = ", ".join(f"{k}={v}" for k, v in config.items())
            report += f"**配置**: {settings}\n\n"

        if kind == 'inference':
            report += f"**alpha**: {metadata.get('alpha')}  **校正**: {metadata.get('adjust')}\n\n"
            report += "| j | 变量 | b̂ | σ̂ | 置信区间 | p 值 | Holm | BH | 阈值选中 |\n"
            report += "|---|---|---|---|---|---|---|---|---|\n"
        else:
            unit = "（%）" if self.style == 'percent' else ""
            report += f"| 方法 | 覆盖率 S₀{unit} | 覆盖率 S₀ᶜ{unit} | 长度 S₀ | 长度 S₀ᶜ |\n"
            report += "|---|---|---|---|---|\n"

        for row in rows:
            report += self.format_row(row)

        for key, label in (('n_failed', '失败重复数'), ('testing', '多重检验')):
            if metadata.get(key) is not None:
                report += f"\n**{label}**: {metadata[key]}\n"
        return report

    def format_row(self, row: Dict) -> str:
        if 'p_value' in row:
            name = row.get('name') or ''
            interval = f"[{_fmt(row['ci_lo'], 4)}, {_fmt(row['ci_hi'], 4)}]"
            flag = "✓" if row.get('reject_threshold') else ""
            return (f"| {row['j']} | {name} | {_fmt(row['b_hat'], 4)} | {_fmt(row['sigma_hat'], 4)} | {interval} | "
                    f"{_fmt(row['p_value'], 4)} | {_fmt(row['p_holm'], 4)} | {_fmt(row['p_bh'], 4)} | {flag} |\n")

        if self.style == 'percent':
            cov_s0 = _fmt(None if row['coverage_S0'] is None else 100 * row['coverage_S0'], 2)
            cov_rest = _fmt(None if row['coverage_S0c'] is None else 100 * row['coverage_S0c'], 2)
        else:
            cov_s0, cov_rest = _fmt(row['coverage_S0']), _fmt(row['coverage_S0c'])
        return (f"| {row['label']} | {cov_s0} | {cov_rest} | "
                f"{_fmt(row['length_S0'])} | {_fmt(row['length_S0c'])} |\n")

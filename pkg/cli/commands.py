"""子命令执行：simulate / fit / infer / screen

所有输出写入 --out 目录，并附带完整的解析后配置与种子；
领域异常、参数错误与 IO 错误映射为退出码 2。
"""

import os
from typing import Dict, List, Optional

import pandas as pd

from cli.config import RunConfig, parse_args
from cli.io import load_csv
from cli.screening import screen
from config.settings import Settings
from formatters import CsvFormatter, JsonFormatter, MarkdownFormatter
from models.errors import DesparsifyError
from pipeline.runner import InferencePipeline, PipelineOptions
from simulation.dgp import DgpConfig
from simulation.experiments import DIAGNOSTIC_COLUMNS, RECORD_COLUMNS, run_ci_experiment, run_fwer_experiment
from simulation.export import Z_COLUMNS, export_standardized
from solvers.base import SolverOptions
from solvers.cross_validation import cv_select_lambda
from solvers.lasso import fit_lasso
from utils.helpers import log, resolve_n_jobs

EXIT_OK = 0
EXIT_ERROR = 2


class CommandRunner:
    """命令执行器 - 流程编排"""

    def __init__(self, cfg: RunConfig):
        """
        初始化执行器

        Args:
            cfg: 已校验的运行配置
        """
        self.cfg = cfg
        self.spec = cfg.loss_spec()
        self.n_jobs = resolve_n_jobs(cfg.threads)
        self.written: List[str] = []

    def solver_options(self) -> SolverOptions:
        return SolverOptions(
            tol=self.cfg.tol,
            max_iter=self.cfg.max_iter,
            standardize=self.cfg.standardize,
            intercept=self.cfg.intercept
        )

    def pipeline_options(self, n_jobs: int) -> PipelineOptions:
        cfg = self.cfg
        return PipelineOptions(
            lam=cfg.lam,
            nodewise_method='sqrt_lasso' if cfg.nodewise == 'sqrt' else 'lasso',
            sqrt_c=cfg.sqrt_c,
            estimate_noise=cfg.estimate_noise,
            solver=self.solver_options(),
            n_folds=cfg.folds,
            path_len=cfg.path_len,
            cv_seed=cfg.seed,
            nodewise_seed=cfg.seed,
            n_jobs=n_jobs
        )

    def _path(self, name: str) -> str:
        return os.path.join(self.cfg.out, name)

    def _write(self, formatter, name: str, rows: List[Dict], metadata: Dict = None) -> None:
        self.written.append(formatter.write(self._path(name), rows, metadata))

    def _write_frame(self, name: str, frame: pd.DataFrame, columns=None) -> None:
        path = self._path(name)
        os.makedirs(self.cfg.out, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(CsvFormatter(columns).format_frame(frame))
        self.written.append(path)

    def _metadata(self, **extra) -> dict:
        return {"command": self.cfg.subcommand, "config": self.cfg.to_dict(), "seed": self.cfg.seed, **extra}

    def _load(self) -> tuple:
        """读取数据；给定 --screen-top 时先筛选，返回 (筛选后数据, 原始列下标, 原始 p)"""
        data = load_csv(self.cfg.csv, self.cfg.response_col)
        log(f"已读取 {self.cfg.csv}：n={data.n}, p={data.p}", "INFO", "CommandRunner")
        if self.cfg.screen_top is None or self.cfg.subcommand == 'screen':
            return data, list(range(data.p)), data.p
        kept = screen(data, self.cfg.screen_top).kept
        log(f"筛选后保留 {len(kept)} 列", "INFO", "CommandRunner")
        return data.columns(kept), [int(j) for j in kept], data.p

    def simulate(self) -> None:
        cfg = self.cfg
        dgp = DgpConfig(n=cfg.n, p=cfg.p, s0=cfg.s0, error_dist=cfg.resolved_error_dist(), seed=cfg.seed)
        options = self.pipeline_options(n_jobs=1)

        if cfg.fwer:
            result = run_fwer_experiment(dgp, self.spec, cfg.reps, options, cfg.alpha, cfg.adjust, self.n_jobs)
            self._write(JsonFormatter(), "results.json", [], self._metadata(testing=result.to_dict()))
            self._write_frame("records.csv", result.replications)
            return

        result = run_ci_experiment(dgp, self.spec, cfg.reps, options, cfg.alpha,
                                   compare_mle=cfg.compare_mle, oracle=cfg.oracle_theta, n_jobs=self.n_jobs)
        self._write(JsonFormatter(), "results.json", [], self._metadata(experiment=result.to_dict()))
        self._write_frame("records.csv", result.records, RECORD_COLUMNS)
        self._write_frame("diagnostics.csv", result.diagnostics, DIAGNOSTIC_COLUMNS)
        self._write_frame("zvalues.csv", export_standardized(result), Z_COLUMNS)

        style = 'proportion' if self.spec.family == 'logistic' else 'percent'
        labels = {'desparsified': f"去稀疏化 {self.spec.family}", 'mle': "极大似然"}
        rows = [{'label': labels.get(m, m), **result.aggregates(m)} for m in result.methods]
        self._write(MarkdownFormatter(style), "report.md", rows, {
            'kind': 'experiment', 'title': '覆盖率与区间长度', 'config': dgp.to_dict(),
            'n_failed': result.n_failed
        })

    def fit(self) -> None:
        data, kept, p_total = self._load()
        opts = self.solver_options()
        path = None
        lam = self.cfg.lam
        if lam is None:
            path = cv_select_lambda(self.spec, data, self.cfg.folds, self.cfg.path_len, seed=self.cfg.seed,
                                    opts=opts, n_jobs=self.n_jobs)
            lam = path.selected_lambda
        result = fit_lasso(self.spec, data, lam, opts)
        self._write(JsonFormatter(), "results.json", [], self._metadata(
            fit=result.to_dict(),
            cv=None if path is None else path.to_dict(),
            columns=kept,
            feature_names=data.feature_names,
            p_total=p_total
        ))

    def infer(self) -> None:
        data, kept, p_total = self._load()
        pipeline = InferencePipeline(self.spec, self.pipeline_options(self.n_jobs))
        result, report = pipeline.infer(data, self.cfg.alpha, self.cfg.adjust, p_total)
        # 筛选后的坐标映射回原始列下标
        for record in report.records:
            record.j = kept[record.j]

        payload = report.to_dict()
        self._write(JsonFormatter(), "results.json", [], self._metadata(
            report=payload, fit=result.fit.to_dict(), noise=None if result.noise is None else result.noise.to_dict()
        ))
        frame = report.to_frame()
        self._write_frame("report.csv", frame)
        z = pd.DataFrame({'j': frame['j'], 'z': frame['b_hat'] / frame['sigma_hat'] * (data.n ** 0.5)})
        self._write_frame("zvalues.csv", z)
        self._write(MarkdownFormatter(), "report.md", payload['records'], {
            'kind': 'inference', 'title': '去稀疏化推断', 'alpha': report.alpha, 'adjust': report.adjust
        })

    def screen(self) -> None:
        data, _, _ = self._load()
        result = screen(data, self.cfg.screen_top)
        names = data.feature_names or [str(j) for j in range(data.p)]
        rows = [{'rank': k + 1, 'j': int(j), 'name': names[j], 'score': float(s)}
                for k, (j, s) in enumerate(zip(result.indices, result.scores))]
        self._write(JsonFormatter(), "results.json", [], self._metadata(screen=result.to_dict()))
        self._write(CsvFormatter(['rank', 'j', 'name', 'score']), "report.csv", rows)

    def run(self) -> None:
        getattr(self, self.cfg.subcommand)()
        log(f"完成，共写出 {len(self.written)} 个文件到 {self.cfg.out}", "INFO", "CommandRunner")


def run(cfg: RunConfig) -> int:
    """
    执行一次运行

    Returns:
        退出码：0 表示全部产物已写出，2 表示出错
    """
    verbose = Settings.VERBOSE
    if cfg.quiet:
        Settings.VERBOSE = False
    try:
        CommandRunner(cfg).run()
        return EXIT_OK
    except (DesparsifyError, ValueError, OSError) as e:
        log(str(e), "ERROR")
        return EXIT_ERROR
    finally:
        Settings.VERBOSE = verbose


def main(argv: Optional[List[str]] = None) -> int:
    """解析参数并执行；参数错误同样返回 2"""
    try:
        cfg = parse_args(argv)
    except ValueError as e:
        log(str(e), "ERROR")
        return EXIT_ERROR
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR
    return run(cfg)

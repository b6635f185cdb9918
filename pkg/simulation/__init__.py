"""模拟模块 - 数据生成过程、覆盖率与多重检验实验及 z 值导出"""

from simulation.dgp import DgpConfig, ERROR_LAWS, make_rng, derive_seed, draw_errors, generate
from simulation.experiments import (
    ExperimentResult,
    FwerResult,
    RECORD_COLUMNS,
    DIAGNOSTIC_COLUMNS,
    fit_diagnostics,
    noise_for,
    run_ci_experiment,
    run_fwer_experiment
)
from simulation.export import export_standardized, pooled_ks, Z_COLUMNS

__all__ = [
    'DgpConfig',
    'ERROR_LAWS',
    'make_rng',
    'derive_seed',
    'draw_errors',
    'generate',
    'ExperimentResult',
    'FwerResult',
    'RECORD_COLUMNS',
    'DIAGNOSTIC_COLUMNS',
    'fit_diagnostics',
    'noise_for',
    'run_ci_experiment',
    'run_fwer_experiment',
    'export_standardized',
    'pooled_ks',
    'Z_COLUMNS'
]

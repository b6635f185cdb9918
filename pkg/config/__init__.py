"""配置模块 - 管理环境变量、求解器与实验协议配置"""

from config.settings import Settings, SOLVER_CONFIG, EXPERIMENT_CONFIG, SPEC_VERSION

__all__ = ['Settings', 'SOLVER_CONFIG', 'EXPERIMENT_CONFIG', 'SPEC_VERSION']

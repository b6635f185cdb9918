"""流程编排模块 - 初始拟合、节点回归、去稀疏化与推断的端到端流程"""

from pipeline.runner import InferencePipeline, PipelineOptions, PipelineResult

__all__ = [
    'InferencePipeline',
    'PipelineOptions',
    'PipelineResult'
]

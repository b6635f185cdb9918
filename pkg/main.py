"""
去稀疏化 ℓ1 惩罚 M 估计 - 主程序入口

模块化架构：
- config: 配置管理
- models: 数据类型、损失族与异常
- solvers: ℓ1 惩罚求解器、λ 路径与交叉验证
- nodewise: 加权节点回归与精度矩阵行
- desparsify: 去稀疏化估计与方差估计
- inference: 置信区间、p 值与多重检验
- simulation: 数据生成与蒙特卡洛实验
- formatters: 结果文件格式化
- cli: 命令行解析与子命令
- utils: 辅助工具函数

用法：
    python main.py simulate --preset robust_gaussian --loss huber --out results/
    python main.py infer --csv data.csv --response-col y --loss quadratic
"""

import sys

from cli import main

if __name__ == "__main__":
    sys.exit(main())

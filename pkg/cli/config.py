"""命令行配置：argparse 解析与 RunConfig 校验"""

import argparse
from dataclasses import asdict, dataclass
from typing import List, Optional

from config.settings import EXPERIMENT_CONFIG, Settings
from inference.multiple_testing import ADJUST_METHODS
from models.losses import LOSS_FAMILIES, LossSpec, make_loss
from simulation.dgp import ERROR_LAWS

SUBCOMMANDS = ('simulate', 'fit', 'infer', 'screen')
DEFAULT_HUBER_K = 0.5


@dataclass
class RunConfig:
    """一次命令行运行的完整配置"""

    subcommand: str
    loss: str = 'quadratic'
    huber_k: Optional[float] = None
    quantile_q: Optional[float] = None
    csv: Optional[str] = None
    response_col: Optional[str] = None
    intercept: bool = False
    standardize: bool = False
    alpha: float = Settings.ALPHA
    adjust: str = 'holm'
    nodewise: str = 'cv'
    sqrt_c: float = Settings.SQRT_C
    screen_top: Optional[int] = None
    estimate_noise: bool = False
    lam: Optional[float] = None
    seed: int = Settings.SEED
    reps: int = 100
    n: int = 500
    p: int = 100
    s0: int = 3
    error_dist: Optional[str] = None
    preset: Optional[str] = None
    compare_mle: bool = False
    oracle_theta: bool = False
    fwer: bool = False
    threads: int = Settings.THREADS
    out: str = Settings.OUT_DIR
    tol: float = Settings.TOL
    max_iter: int = Settings.MAX_ITER
    folds: int = Settings.FOLDS
    path_len: int = Settings.PATH_LEN
    quiet: bool = False

    def validate(self) -> None:
        """在任何计算之前检查参数组合"""
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"未知子命令: {self.subcommand}")
        if self.loss not in LOSS_FAMILIES:
            raise ValueError(f"--loss 必须是 {', '.join(LOSS_FAMILIES)} 之一")
        if self.quantile_q is not None and self.loss != 'quantile':
            raise ValueError(f"--quantile-q 只能与 --loss quantile 一起使用（当前 {self.loss}）")
        if self.huber_k is not None and self.loss != 'huber':
            raise ValueError(f"--huber-k 只能与 --loss huber 一起使用（当前 {self.loss}）")
        if not 0 < self.alpha < 1:
            raise ValueError("--alpha 必须位于 (0, 1)")
        if self.adjust not in ADJUST_METHODS:
            raise ValueError(f"--adjust 必须是 {', '.join(ADJUST_METHODS)} 之一")
        if self.nodewise not in ('cv', 'sqrt'):
            raise ValueError("--nodewise 必须是 cv 或 sqrt")
        if self.lam is not None and not self.lam > 0:
            raise ValueError("--lambda 必须为正数")
        if self.threads < 0 or self.folds < 2 or self.path_len < 1 or self.max_iter < 1 or not self.tol > 0:
            raise ValueError("--threads/--folds/--path-len/--max-iter/--tol 取值无效")
        if self.subcommand == 'simulate':
            self._validate_simulate()
        else:
            if not self.csv:
                raise ValueError(f"{self.subcommand} 需要 --csv")
            if self.response_col is None:
                raise ValueError(f"{self.subcommand} 需要 --response-col")
            if self.screen_top is not None and self.screen_top < 1:
                raise ValueError("--screen-top 至少为 1")
            if self.subcommand == 'screen' and self.screen_top is None:
                raise ValueError("screen 需要 --screen-top")
            if self.compare_mle or self.oracle_theta or self.fwer:
                raise ValueError("--compare-mle/--oracle-theta/--fwer 只适用于 simulate")
        # 构造损失以检查 K、q 的取值
        self.loss_spec()

    def _validate_simulate(self) -> None:
        if self.preset is not None and self.preset not in EXPERIMENT_CONFIG:
            raise ValueError(f"未知预设: {self.preset}（可选 {', '.join(EXPERIMENT_CONFIG)}）")
        if self.csv:
            raise ValueError("simulate 不读取 --csv")
        if self.reps < 1 or self.n < 1 or self.p < 1 or not 0 <= self.s0 <= self.p:
            raise ValueError("--reps/--n/--p/--s0 取值无效")
        dist = self.resolved_error_dist()
        if dist not in ERROR_LAWS:
            raise ValueError(f"--error-dist 必须是 {', '.join(ERROR_LAWS)} 之一")
        if (self.loss == 'logistic') != (dist == 'logistic_bernoulli'):
            raise ValueError("logistic 损失必须搭配 logistic_bernoulli 数据，反之亦然")
        if self.oracle_theta and self.loss == 'logistic':
            raise ValueError("--oracle-theta 不支持 logistic 损失")
        if self.compare_mle and self.loss not in ('logistic', 'quadratic'):
            raise ValueError("--compare-mle 只支持 logistic 与 quadratic 损失")

    def resolved_error_dist(self) -> str:
        if self.error_dist is not None:
            return self.error_dist
        return 'logistic_bernoulli' if self.loss == 'logistic' else 'gaussian'

    def loss_spec(self) -> LossSpec:
        huber_k = self.huber_k
        if self.loss == 'huber' and huber_k is None:
            huber_k = DEFAULT_HUBER_K
        return make_loss(self.loss, huber_k=huber_k, quantile_q=self.quantile_q)

    def apply_preset(self) -> None:
        """用 EXPERIMENT_CONFIG 预设覆盖 n、p、s0、reps 与误差分布"""
        if self.preset is None:
            return
        preset = EXPERIMENT_CONFIG[self.preset]
        self.n, self.p, self.s0 = preset['n'], preset['p'], preset['s0']
        self.reps = preset['reps']
        self.error_dist = preset['error_dist']
        if self.loss not in preset['losses']:
            self.loss = preset['losses'][0]
        if self.loss == 'huber' and self.huber_k is None:
            self.huber_k = preset.get('huber_k')
        self.compare_mle = self.compare_mle or preset.get('compare_mle', False)
        if 'adjust' in preset:
            self.adjust = preset['adjust']
            self.fwer = True

    def to_dict(self) -> dict:
        data = asdict(self)
        data['lambda'] = data.pop('lam')
        return data


def build_parser() -> argparse.ArgumentParser:
    """构造命令行解析器"""
    parser = argparse.ArgumentParser(
        prog='desparsify',
        description='去稀疏化 ℓ1 惩罚 M 估计：模拟、拟合、推断与筛选'
    )
    sub = parser.add_subparsers(dest='subcommand', required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--loss', default='quadratic', choices=LOSS_FAMILIES, help='损失族')
    common.add_argument('--huber-k', type=float, default=None, help='Huber 半径 K（默认 0.5）')
    common.add_argument('--quantile-q', type=float, default=None, help='分位数水平 q（默认 0.5）')
    common.add_argument('--alpha', type=float, default=Settings.ALPHA, help='显著性水平')
    common.add_argument('--adjust', default='holm', choices=ADJUST_METHODS, help='多重检验校正')
    common.add_argument('--nodewise', default='cv', choices=('cv', 'sqrt'),
                        help='节点回归：cv 为交叉验证 Lasso，sqrt 为通用 λ 的平方根 Lasso')
    common.add_argument('--sqrt-c', type=float, default=Settings.SQRT_C, help='通用 λ = c·sqrt(log p / n) 中的 c')
    common.add_argument('--lambda', dest='lam', type=float, default=None, help='固定初始估计的 λ（默认交叉验证）')
    common.add_argument('--standardize', action='store_true', help='拟合前按列标准化（不影响筛选）')
    common.add_argument('--seed', type=int, default=Settings.SEED, help='随机种子')
    common.add_argument('--threads', type=int, default=Settings.THREADS, help='并行工作进程数（0 为全部核心）')
    common.add_argument('--out', default=Settings.OUT_DIR, help='输出目录')
    common.add_argument('--tol', type=float, default=Settings.TOL, help='求解器容差')
    common.add_argument('--max-iter', type=int, default=Settings.MAX_ITER, help='求解器最大迭代次数')
    common.add_argument('--folds', type=int, default=Settings.FOLDS, help='交叉验证折数')
    common.add_argument('--path-len', type=int, default=Settings.PATH_LEN, help='λ 路径长度')
    common.add_argument('--quiet', action='store_true', help='只输出警告和错误')

    simulate = sub.add_parser('simulate', parents=[common], help='蒙特卡洛实验')
    simulate.add_argument('--preset', choices=sorted(EXPERIMENT_CONFIG), default=None, help='实验协议预设')
    simulate.add_argument('--n', type=int, default=500)
    simulate.add_argument('--p', type=int, default=100)
    simulate.add_argument('--s0', type=int, default=3, help='真实支撑集大小')
    simulate.add_argument('--error-dist', choices=ERROR_LAWS, default=None)
    simulate.add_argument('--reps', type=int, default=100, help='重复次数')
    simulate.add_argument('--compare-mle', action='store_true', help='同时报告未惩罚极大似然的 Wald 区间')
    simulate.add_argument('--oracle-theta', action='store_true', help='同时计算以真实 Θ 去稀疏化的 b̃')
    simulate.add_argument('--fwer', action='store_true', help='运行多重检验（FWER/TPR）实验')

    for name, text in (('fit', '拟合初始 ℓ1 惩罚估计'), ('infer', '去稀疏化推断'), ('screen', '边际相关筛选')):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument('--csv', required=True, help='输入 CSV（首行为表头）')
        p.add_argument('--response-col', required=True, help='响应列的名称或从 0 开始的下标')
        p.add_argument('--intercept', action='store_true', help='拟合不惩罚的截距')
        p.add_argument('--screen-top', type=int, default=None, help='按 |yᵀXᵢ| 保留前 m 列')
        if name == 'infer':
            p.add_argument('--estimate-noise', action='store_true',
                           help='用核密度估计 LAD/Huber 修正所需的噪声常数（实验性）')
    return parser


def parse_args(argv: Optional[List[str]] = None) -> RunConfig:
    """解析命令行参数并校验"""
    args = vars(build_parser().parse_args(argv))
    fields = RunConfig.__dataclass_fields__
    cfg = RunConfig(**{k: v for k, v in args.items() if k in fields})
    cfg.apply_preset()
    cfg.validate()
    return cfg

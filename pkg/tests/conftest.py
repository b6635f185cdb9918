"""测试公共设置：安静日志、--runslow 开关与共享夹具"""

import numpy as np
import pytest

from config.settings import Settings
from models.losses import make_loss

LOSS_CASES = [
    ('quadratic', {}),
    ('huber', {'huber_k': 0.5}),
    ('quantile', {'quantile_q': 0.5}),
    ('logistic', {}),
]


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="运行 slow 标记的蒙特卡洛验收测试")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def quiet_settings():
    verbose = Settings.VERBOSE
    Settings.VERBOSE = False
    yield
    Settings.VERBOSE = verbose


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(params=LOSS_CASES, ids=[case[0] for case in LOSS_CASES])
def loss_spec(request):
    family, kwargs = request.param
    return make_loss(family, **kwargs)

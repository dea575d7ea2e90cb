"""
pytest 配置
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# 添加 src 到路径
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from domtest.data import PolicySample, build_grid, pooled_support  # noqa: E402
from domtest.edf import EdfSummary  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="运行 Monte Carlo 验收测试")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def random_sample(label: str, n: int, seed: int, x_shift: float = 0.0) -> PolicySample:
    """相关的 (x, z) 随机样本"""
    rng = np.random.default_rng(seed)
    x = rng.normal(x_shift, 0.5, n)
    z = 7.5 + 0.4 * x + rng.normal(0.0, 0.6, n)
    return PolicySample(label, x, z)


@pytest.fixture
def sample_pair():
    """两组 60 个观测的随机样本"""
    return random_sample("A", 60, 1), random_sample("B", 60, 2, x_shift=0.2)


@pytest.fixture
def edf_pair(sample_pair):
    """共用支撑的两组 EDF 摘要与 10×8 网格"""
    a, b = sample_pair
    box = pooled_support(a, b)
    grid = build_grid(box, 10, 8)
    return EdfSummary.from_sample(a, box), EdfSummary.from_sample(b, box), grid

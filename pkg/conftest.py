# encoding:utf-8
"""
测试共用 fixture
"""

import numpy as np
import pytest

from common.workspace import reset_workspace
from config import Config, set_config
from ring.corpus import builtin_ring


@pytest.fixture(autouse=True)
def default_config():
    """每个测试使用默认配置与空工作区"""
    config = Config()
    set_config(config)
    reset_workspace(config)
    yield config
    set_config(Config())


@pytest.fixture
def ring_a():
    return builtin_ring("A")


@pytest.fixture
def ring_b():
    return builtin_ring("B")


@pytest.fixture
def ring_c():
    return builtin_ring("C")


@pytest.fixture
def ring_d():
    return builtin_ring("D")


@pytest.fixture
def ring_e():
    return builtin_ring("E")


@pytest.fixture
def rng():
    return np.random.default_rng(0)

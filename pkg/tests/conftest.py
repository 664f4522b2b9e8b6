"""测试公共夹具"""
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.core.basis import BasisSpec
from src.core.special_fn import JacobiParams

# 覆盖四类 Chebyshev、Legendre 以及一般非对称参数
PARAM_GRID = [(-0.5, -0.5), (0.5, 0.5), (0.5, -0.5), (-0.5, 0.5), (0.0, 0.0), (0.3, 1.7), (1.0, 0.0)]


@pytest.fixture(autouse=True)
def _no_log_files(monkeypatch):
    """测试时不写日志文件"""
    monkeypatch.setenv("TANHSPEC_LOG_FILE", "0")
    monkeypatch.delenv("TANHSPEC_CONFIG", raising=False)
    monkeypatch.delenv("TANHSPEC_LOG_LEVEL", raising=False)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=PARAM_GRID, ids=lambda p: f"a{p[0]}_b{p[1]}")
def params(request):
    return JacobiParams(*request.param)


@pytest.fixture
def cheb_t():
    return BasisSpec.of(-0.5, -0.5)


@pytest.fixture
def cheb_u():
    return BasisSpec.of(0.5, 0.5)

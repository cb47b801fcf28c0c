import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from focus_detect import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the batch kernels once so no test measures JIT time."""
    _kernels.warmup()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

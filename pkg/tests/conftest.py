import numpy as np
import pytest

try:
    from hypothesis import settings

    settings.register_profile("suite", deadline=None, max_examples=60)
    settings.load_profile("suite")
except ImportError:
    pass


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

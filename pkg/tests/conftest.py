import numpy as np
import pytest

from src.utils.template import build_template, procedural_fish_mask, shutdown_template
from tests.helpers import rect_mask


@pytest.fixture(scope="session")
def fish_mask():
    return procedural_fish_mask()


@pytest.fixture(scope="session")
def template(fish_mask):
    """Default stride-2 procedural template."""
    return build_template(fish_mask, stride=2)


@pytest.fixture(scope="session")
def fine_template(fish_mask):
    return build_template(fish_mask, stride=1)


@pytest.fixture(scope="session")
def rect_template():
    """40 px wide, 120 px tall rectangle; all points on half-integer coordinates."""
    return build_template(rect_mask(40, 120), stride=1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def reset_default_template():
    yield
    shutdown_template()

import pytest

from lipwalk import ModelParams, step_constants


@pytest.fixture
def model10() -> ModelParams:
    """The reference model used throughout: g = 10 m/s^2, h = 1 m."""
    return ModelParams(10.0, 1.0)


@pytest.fixture
def consts03(model10):
    """Step constants for the reference step period T = 0.3 s."""
    return step_constants(0.3, model10)

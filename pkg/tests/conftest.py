import pytest

from nusamp.signals import AnalyticSignalSpec, generate

DENSE_GRID = 2**16


@pytest.fixture(scope="session")
def exp_signal():
    return generate(AnalyticSignalSpec("exponential", alpha=3.0), DENSE_GRID)


@pytest.fixture(scope="session")
def cosine_signal():
    return generate(AnalyticSignalSpec("cosine", alpha=5, scale=255.0), DENSE_GRID)


@pytest.fixture(scope="session")
def chirp_signal():
    return generate(AnalyticSignalSpec("chirp", alpha=5.0, scale=255.0), DENSE_GRID)

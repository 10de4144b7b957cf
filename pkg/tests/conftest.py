import pytest
from hypothesis import HealthCheck, settings

from rmclive.builtins import builtin

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def flip():
    return builtin("flip")


@pytest.fixture(scope="session")
def ij():
    return builtin("israeli-jalfon")

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dustflame.core import SimulationConfig, SpeciesTable

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def species():
    return SpeciesTable()


@pytest.fixture
def small_cfg():
    return SimulationConfig(n_cells=64, dt=2e-4, t_end=0.01, arrhenius_theta_cut=400.0)


def random_fractions(rng, n):
    y = rng.random((4, n))
    return y / y.sum(axis=0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pswfkit import _accel, build_basis, prolate_grid

settings.register_profile(
    "default", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("default")

BACKENDS = ["numpy"] + (["numba"] if _accel.NUMBA_AVAILABLE else [])

ACCEPTANCE_LINES = []


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture(params=BACKENDS)
def process_backend(request, monkeypatch):
    """Switch the process-wide kernel choice for the duration of one test."""
    monkeypatch.setattr(_accel, "USE_NUMBA", request.param == "numba")
    return request.param


@pytest.fixture(scope="session")
def basis_grid():
    cache = {}

    def get(c, N):
        if (c, N) not in cache:
            b = build_basis(c, N)
            cache[(c, N)] = (b, prolate_grid(b))
        return cache[(c, N)]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

import functools
import os
import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def desk_run(eps=0.5, absorber=True, snapshots=(20.0, 40.0)):
    """Desk-scale run (c=1, L=512, n=8192) shared between test modules.

    Returns ``({t: FieldSlice}, wall_time)``.
    """
    from mkdvshock.oracle import GridSpec, solve_mkdv

    grid = GridSpec(t_end=max(snapshots), absorber=absorber)
    start = time.perf_counter()
    slices = {s.t: s for s in solve_mkdv(1.0, grid, eps=eps, snapshots=list(snapshots))}
    return slices, time.perf_counter() - start


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import math
from functools import lru_cache

import pytest

# filled by test_acceptance.report, echoed in the terminal summary
ACCEPTANCE_LINES = []

from glvortex.radial import build_mesh, continuation_solve


@lru_cache(maxsize=None)
def mesh(n=2000, grading=2.0):
    return build_mesh(n, grading)


@lru_cache(maxsize=None)
def profile(N, eps, potential="quadratic", n=2000):
    return continuation_solve(N, eps, potential, mesh(n))


@pytest.fixture(scope="session")
def mesh2000():
    return mesh()


@pytest.fixture(scope="session")
def prof7():
    """N = 7, eps = 0.5, quadratic W."""
    return profile(7, 0.5)


@pytest.fixture(scope="session")
def prof7_inf():
    return profile(7, math.inf)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda x: int(x.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)

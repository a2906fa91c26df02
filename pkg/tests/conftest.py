from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from helpers import ACCEPTANCE_LINES
from skewflow.reductions import MatchingInstance

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def k3() -> MatchingInstance:
    return MatchingInstance.simple(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def five_node() -> MatchingInstance:
    # nodes a..e, edges ab, bc, bd, cd, de
    return MatchingInstance.simple(5, [(0, 1), (1, 2), (1, 3), (2, 3), (3, 4)])

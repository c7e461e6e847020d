from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "cohesio",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("cohesio")


@pytest.fixture(scope="session")
def delta1():
    from cohesio.fincat import builtin_site

    return builtin_site("delta1")


@pytest.fixture(scope="session")
def delta2():
    from cohesio.fincat import builtin_site

    return builtin_site("delta:2")


@pytest.fixture(scope="session")
def ctx1(delta1):
    from cohesio.cohesion import CohesionContext

    return CohesionContext(delta1)


@pytest.fixture(scope="session")
def ctx2(delta2):
    from cohesio.cohesion import CohesionContext

    return CohesionContext(delta2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

import os
import random

import pytest
from hypothesis import HealthCheck, settings

from fogecc.registry import CURVE_NAMES, TOY17, registry_get

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(params=CURVE_NAMES)
def curve(request):
    return registry_get(request.param)


@pytest.fixture
def toy():
    return TOY17


@pytest.fixture
def rng():
    return random.Random(1234)


# -- acceptance reporting -------------------------------------------------------------

_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def record_criterion():
    """Store a pass/fail line for the summary and fail the test if needed."""

    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}"
        if detail:
            line += f" ({detail})"
        _ACCEPTANCE[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])

import random

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(20261017)


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_results", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

import json
from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

GOLDENS = json.loads((Path(__file__).parent / "goldens.json").read_text())
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def goldens():
    return GOLDENS


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

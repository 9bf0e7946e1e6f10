import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from isotypic import efgame  # noqa: E402

# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE: dict = {}


@pytest.fixture
def fresh_game_cache():
    efgame.clear_cache()
    yield
    efgame.clear_cache()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")

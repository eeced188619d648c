import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from justcheck import catalog  # noqa: E402

_ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store one acceptance line: record(number, passed, detail)."""
    def _record(number, passed, detail=""):
        _ACCEPTANCE[number] = (passed, detail)
        print(f"AC{number}: {'PASS' if passed else 'FAIL'} {detail}")
    return _record


@pytest.fixture
def croissant():
    return catalog.load_example("croissant")


@pytest.fixture
def alice():
    return catalog.load_example("alice-cataline")


@pytest.fixture
def phone():
    return catalog.load_example("phone-Q")


@pytest.fixture
def par_p():
    return catalog.load_example("par-P")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"AC{number:<2} {'PASS' if passed else 'FAIL'}  {detail}")

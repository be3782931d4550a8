import contextlib

import pytest

_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Context manager recording one pass/fail line per acceptance criterion."""

    @contextlib.contextmanager
    def criterion(number, name):
        try:
            yield
        except BaseException:
            _ACCEPTANCE[number] = (name, False)
            raise
        _ACCEPTANCE[number] = (name, True)

    return criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        name, passed = _ACCEPTANCE[number]
        terminalreporter.write_line(
            f"ACCEPTANCE {number}: {'PASS' if passed else 'FAIL'} - {name}")

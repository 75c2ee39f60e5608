import pytest

_RESULTS = {}


@pytest.fixture
def record():
    """Record one acceptance line: record(number, passed, detail)."""
    def _record(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        _RESULTS[number] = line
        print(line)
    return _record


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_RESULTS):
            terminalreporter.write_line(_RESULTS[number])

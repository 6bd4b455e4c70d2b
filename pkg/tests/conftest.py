import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def record():
    """Store the pass/fail line of one acceptance criterion; printed in the terminal summary."""
    def _record(number: int, passed: bool, detail: str) -> bool:
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        _LINES[number] = line
        print(line)
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance")
        for k in sorted(_LINES):
            terminalreporter.write_line(_LINES[k])

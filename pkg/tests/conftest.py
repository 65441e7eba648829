import pytest

_LINES = []


@pytest.fixture
def record():
    """Log one acceptance line; returns ``ok`` so tests can ``assert record(...)``."""
    def rec(name, ok, detail):
        ok = bool(ok)
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        _LINES.append(line)
        print(line)
        return ok
    return rec


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)

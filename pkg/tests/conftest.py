import pytest

ACCEPTANCE: dict[int, tuple[str, bool, float, str]] = {}


@pytest.fixture
def record():
    """Store one acceptance verdict: record(number, title, ok, seconds, detail)."""

    def _record(number, title, ok, seconds, detail=""):
        ACCEPTANCE[number] = (title, ok, seconds, detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, secs, detail = ACCEPTANCE[n]
        line = f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title} ({secs:.2f}s)"
        terminalreporter.write_line(line + (f" -- {detail}" if detail else ""))

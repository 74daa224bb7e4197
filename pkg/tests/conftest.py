import pytest

from helpers import m1, m2

_criteria: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def micro1():
    return m1()


@pytest.fixture
def micro2():
    return m2()


@pytest.fixture
def criterion():
    """Record one acceptance line; the table is printed at the end of the session."""

    def record(label: str, ok: bool, detail: str = ""):
        _criteria[label] = (bool(ok), detail)
        print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0]) if s.split()[0].isdigit() else 99):
        ok, detail = _criteria[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")

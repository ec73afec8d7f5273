import pytest

CRITERIA: dict = {}


def record(number: int, passed, detail: str) -> None:
    # passed is True, False or None (not run)
    CRITERIA[number] = (passed, detail)


@pytest.fixture
def criterion():
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'SKIP' if ok is None else 'PASS' if ok else 'FAIL'} {detail}")

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    """Record a pass/fail line for the acceptance summary."""

    def record(label, passed, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {label}{': ' + detail if detail else ''}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

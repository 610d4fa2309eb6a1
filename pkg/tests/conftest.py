import pytest

from zpsym.padic import PrecisionRing

# filled by test_acceptance, printed once at the end of the run
ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def ring3():
    return PrecisionRing(3, 4)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for ident in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[ident])

import pytest

from covsys import Ecs

EXAMPLE13 = [(2, 6), (4, 6), (1, 10), (3, 10), (7, 10), (9, 10), (0, 15),
             (5, 30), (6, 30), (12, 30), (18, 30), (24, 30), (25, 30)]


@pytest.fixture
def example13():
    return Ecs(EXAMPLE13)


def pytest_terminal_summary(terminalreporter):
    import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(acceptance_log.LINES):
            terminalreporter.write_line(acceptance_log.LINES[number])

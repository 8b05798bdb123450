import pytest

from clocal.graph import LabeledGraph


@pytest.fixture
def single_edge():
    return LabeledGraph.from_edges(2, [(1, 2)])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

import pytest

from feq.problem import load_corpus


@pytest.fixture(scope="session")
def corpus():
    return {p.name: p for p in load_corpus()}


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

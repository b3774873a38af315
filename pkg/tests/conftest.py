import pytest

from wplab.coener import CodedSet, Schedule
from wplab.sampling import standard_coded_sets

ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def coded_sets():
    return standard_coded_sets()


@pytest.fixture
def empty_set():
    return CodedSet(Schedule.finite({}))


@pytest.fixture
def record_criterion():
    def record(number: int, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)

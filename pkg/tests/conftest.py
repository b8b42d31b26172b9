from pathlib import Path

import pytest

from excitonlaser import nuclides

ROOT = Path(__file__).resolve().parent.parent
BASELINE = ROOT / "scenarios" / "fe57_baseline.json"

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def baseline():
    return nuclides.load_scenario(BASELINE)


@pytest.fixture(scope="session")
def fe57():
    return nuclides.builtin_transition("Fe57")


@pytest.fixture(scope="session")
def hg201():
    return nuclides.builtin_transition("Hg201")


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion, then assert."""

    def check(number: int, title: str, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"
        _acceptance_lines.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)

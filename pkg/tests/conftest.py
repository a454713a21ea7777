import pytest
from hypothesis import settings

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

CRITERIA: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::test_criterion_")[1]
        CRITERIA[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(CRITERIA, key=lambda n: int(n.split("_")[0])):
        number, _, title = name.partition("_")
        terminalreporter.write_line(f"criterion {number} ({title.replace('_', ' ')}): {CRITERIA[name]}")


@pytest.fixture
def acceptance_line(capsys):
    """Print one result line per criterion, visible with or without -s."""
    def emit(text: str):
        with capsys.disabled():
            print(f"\n{text}")
    return emit

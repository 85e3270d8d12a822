import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: dict = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (outcome, duration) in sorted(_ACCEPTANCE.items(), key=lambda kv: _order(kv[0])):
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}  ({duration:.2f}s)")


def _order(name: str):
    parts = name.split("_")
    try:
        return int(parts[1]), name
    except (IndexError, ValueError):
        return 99, name

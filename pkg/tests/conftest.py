import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# result lines collected by the acceptance suite
ACCEPTANCE_LINES = []


def record(criterion, description, passed):
    """``passed`` is True, False, or None for a skipped check."""
    status = "SKIP" if passed is None else ("PASS" if passed else "FAIL")
    line = f"[{status}] criterion {criterion}: {description}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def accept():
    """Record one PASS/FAIL line for an acceptance criterion and assert it."""

    def record(cid: str, text: str, ok: bool, elapsed: float, limit: float | None = None,
               detail: str = "") -> None:
        in_time = limit is None or elapsed < limit
        passed = ok and in_time
        budget = f" limit {limit:g}s" if limit is not None else ""
        line = f"{'PASS' if passed else 'FAIL'} [{cid}] {text} ({elapsed:.2f}s{budget})"
        if detail:
            line += f" :: {detail}"
        if not in_time:
            line += " :: over time budget"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

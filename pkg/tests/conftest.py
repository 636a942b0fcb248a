from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> (passed, detail); filled by the acceptance tests
CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record an acceptance criterion outcome; the summary prints one line each."""

    def record(number: int, passed: bool, detail: str = "") -> None:
        prev = CRITERIA.get(number)
        ok = passed and (prev is None or prev[0])
        parts = [d for d in ((prev[1] if prev else ""), detail) if d]
        CRITERIA[number] = (ok, "; ".join(parts))

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        ok, detail = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")

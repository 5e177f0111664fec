import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE = {}


@pytest.fixture
def record_criterion():
    """Record ``(criterion, part, passed, detail)`` and print one line for it."""
    def record(number: int, part: str, passed: bool, detail: str):
        ACCEPTANCE.setdefault(number, []).append((part, passed, detail))
        print(f"criterion {number} [{part}]: {'PASS' if passed else 'FAIL'}: {detail}")
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[number]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{name} {'ok' if passed else 'FAILED'} ({d})"
                           for name, passed, d in parts)
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}: {detail}")

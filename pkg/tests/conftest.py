from fractions import Fraction as F

import pytest

ACCEPTANCE_LINES: list[str] = []


def small_games(max_n=7, strict=False):
    """(n, k, tau) with 1 <= k <= n <= max_n (k < n when strict)."""
    for n in range(1, max_n + 1):
        for k in range(1, n if strict else n + 1):
            for tau in range(k, n + 1):
                yield n, k, tau


GRID_P = (F(0), F(1, 3), F(1, 2), F(1))


@pytest.fixture
def acceptance_line():
    def record(number, ok, detail=""):
        ACCEPTANCE_LINES.append(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import os

import pytest

from geodesic_count.quadfield import ideal_count_sieve

# p * 10^7 + 1 for p = 5, the largest correlation index the acceptance runs touch
BIG_LIMIT = 50_000_001

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def big_table():
    return ideal_count_sieve(BIG_LIMIT, workers=os.cpu_count() or 1)


@pytest.fixture(scope="session")
def small_table():
    return ideal_count_sieve(1_000_000)


@pytest.fixture(scope="session")
def acceptance():
    def record(number: int, ok: bool, detail: str) -> None:
        _ACCEPTANCE[number] = (bool(ok), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")

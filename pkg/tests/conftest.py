from pathlib import Path

import pytest
from hypothesis import settings

from zpd.zeros.search import find_zeros
from zpd.zeros.table import ingest_zero_table

settings.register_profile("zpd", deadline=None, max_examples=60)
settings.load_profile("zpd")

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def reference_zeros():
    return ingest_zero_table(DATA / "zeros100.txt")


@pytest.fixture(scope="session")
def zeros_700():
    return find_zeros(700.0)


@pytest.fixture(scope="session")
def zeros_21k():
    return find_zeros(2.1e4)


@pytest.fixture(scope="session")
def zeros_126k():
    # the superbound grid reaches X = 10^4 with B on [1, 2], so 2 pi 10^4 2
    return find_zeros(1.26e5, ceiling=1.3e5)


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line; the lines are repeated in the terminal summary."""
    log = request.config.__dict__.setdefault("_zpd_acceptance", [])

    def record(number, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
        log.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_zpd_acceptance", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

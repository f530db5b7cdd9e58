import numpy as np
import pytest

from wcospec.corpus import corpus
from wcospec.dynamics import GOLDEN, EllipticAutomorphism


@pytest.fixture(scope="session")
def golden():
    return EllipticAutomorphism.rotation(GOLDEN)


@pytest.fixture(scope="session")
def reference_weights():
    return corpus()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)



_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def verdict(request):
    """Record one acceptance line; the test still asserts on ``ok``."""
    lines = request.config.stash[_VERDICTS]

    def record(tag, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} {tag}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash[_VERDICTS]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1][1:].rstrip(":"))):
            terminalreporter.write_line(line)

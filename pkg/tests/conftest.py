import numpy as np
import pytest

from theta_spanner.verify import random_instance

ALL_M = list(range(6, 14))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_instance(m, seed, n=30, n_constraints=10):
    return random_instance(n, n_constraints, np.random.default_rng([m, seed]), m)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

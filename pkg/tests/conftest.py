import numpy as np
import pytest

from bobk.validation import random_potential


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def corpus():
    """Twenty random mean-zero potentials with K <= 8 and norm <= 2."""
    rng = np.random.default_rng(2024)
    return [random_potential(rng, K_max=8, max_norm=2.0) for _ in range(20)]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])

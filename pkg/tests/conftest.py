import numpy as np
import pytest

from vacrand.source import NoiseParams, generate_samples


@pytest.fixture(scope="session")
def ref_block():
    """10^7 simulated samples at the reference noise levels."""
    return generate_samples(NoiseParams(seed=11), 10_000_000)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

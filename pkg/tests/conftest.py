import sys

import numpy as np
import pytest

from surflab import Calibration, Layout


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def layout():
    return Layout.build(3)


@pytest.fixture(scope="session")
def cal():
    return Calibration.load()


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def noisy_memory(layout, cal):
    """Factory for calibrated-noise memory circuits: (basis, rounds) -> (circuit, meta)."""
    from surflab import attach_noise, memory_circuit

    def make(basis="Z", rounds=3):
        circ, meta = memory_circuit(layout, basis=basis, rounds=rounds)
        return attach_noise(circ, cal), meta

    return make

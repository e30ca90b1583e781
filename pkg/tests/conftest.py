import numpy as np
import pytest

from wdsec.waveform import WaveformConfig

# one human-readable verdict line per end-to-end gate, echoed after the
# test summary so they survive pytest's output capture
GATE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if GATE_LINES:
        terminalreporter.section("acceptance gates")
        for line in GATE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0x5EED)


@pytest.fixture
def small_cfg() -> WaveformConfig:
    return WaveformConfig(n_subcarriers=16, oversampling=8)


@pytest.fixture
def tiny_cfg() -> WaveformConfig:
    return WaveformConfig(n_subcarriers=4, oversampling=4)

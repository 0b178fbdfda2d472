import numpy as np
import pytest

from su11_parity.model import InterferometerConfig

#: Sampling box for random working points (dual-route checks and friends).
G_RANGE = (0.05, 3.0)
R_RANGE = (0.0, 2.5)
N_TH_RANGE = (0.0, 30.0)
SEED = 2024


def random_configs(count, seed=SEED, phi_range=(-np.pi, np.pi)):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        g = rng.uniform(*G_RANGE)
        r = rng.uniform(*R_RANGE)
        n_th = rng.uniform(*N_TH_RANGE)
        phi = rng.uniform(*phi_range)
        out.append(InterferometerConfig(g, r, n_th, phi))
    return out


@pytest.fixture(scope="session")
def configs_1000():
    return random_configs(1000)


_ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Log one acceptance line, e.g. ``record("3", ok, "max rel err 1e-12")``."""

    def _record(label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from gnwaves.multipliers import MultiplierSpec
from gnwaves.operators import PhysicalParams
from gnwaves.spectral import Grid, Profile

# (gamma, delta, multiplier kind) combinations exercised by the operator tests
MODELS = [
    (0.0, 1.0, "id"),
    (0.0, 1.0, "imp"),
    (1.0, 0.5, "id"),
    (1.0, 0.5, "imp"),
    (0.3, 1.7, "imp"),
]


def model(gamma, delta, kind):
    p = PhysicalParams(gamma, delta)
    if kind == "id":
        return p, MultiplierSpec.identity(), MultiplierSpec.identity()
    return p, MultiplierSpec.improved(1.0), MultiplierSpec.improved(1.0 / delta)


def smooth_even(grid, rng, amp=0.1, modes=6):
    """Random smooth even profile with max|zeta| = amp."""
    x = grid.nodes
    v = np.zeros_like(x)
    for _ in range(modes):
        w = rng.uniform(2.0, 8.0)
        v += rng.normal() * np.exp(-(x / w) ** 2) * np.cos(rng.uniform(0, 1.0) * x)
    return Profile(grid, amp * v / np.max(np.abs(v)))


def smooth_random(grid, rng, amp=0.1, modes=6):
    """Random smooth profile without symmetry."""
    x = grid.nodes
    v = np.zeros_like(x)
    for _ in range(modes):
        w = rng.uniform(2.0, 8.0)
        v += rng.normal() * np.exp(-((x - rng.uniform(-5, 5)) / w) ** 2)
    return Profile(grid, amp * v / np.max(np.abs(v)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def grid():
    return Grid(60.0, 256)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)

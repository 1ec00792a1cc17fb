import math

import numpy as np
import pytest

from qutrit_bell.experiment import MeasurementSettings, PureState, ProbabilityTable
from qutrit_bell.tensor import ALPHA

A = ALPHA
A2 = ALPHA**2

# Q_ijk reported for the reference phases, keyed by (i, j, k)
PAPER_Q = {
    (1, 1, 1): (1 + A2) / 3,
    (1, 1, 2): 2 * A2 / 3,
    (1, 2, 1): 2 / 3,
    (1, 2, 2): -2 * (1 + A2) / 3,
    (2, 1, 1): 2 * A2 / 3,
    (2, 1, 2): -1 / 3,
    (2, 2, 1): -A / 3,
    (2, 2, 2): 2 * A2 / 3,
}

_acceptance_lines = []


@pytest.fixture
def report():
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def _report(label, ok, detail=""):
        _acceptance_lines.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        assert ok, f"{label}: {detail}"

    return _report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20021)


def random_settings(rng):
    return MeasurementSettings.from_phases(rng.uniform(0, 2 * math.pi, 18))


def random_state(rng):
    v = rng.normal(size=27) + 1j * rng.normal(size=27)
    return PureState(v / np.linalg.norm(v))


def random_table(rng):
    """A normalised table with no quantum origin: Dirichlet rows per setting triple."""
    v = rng.dirichlet(np.full(27, 0.7), size=8)
    return ProbabilityTable(v.reshape(2, 2, 2, 3, 3, 3))

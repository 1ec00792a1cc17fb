import math

import numpy as np
import pytest

from qutrit_bell.sixport import PhaseTriple, build_unitary, projector_set
from qutrit_bell.tensor import ALPHA, trace

S3 = math.sqrt(3)


def test_zero_phase_is_fourier_matrix():
    u = build_unitary((0, 0, 0))
    a = ALPHA
    expected = np.array([[1, 1, 1], [1, a, a**2], [1, a**2, a**4]]) / S3
    np.testing.assert_allclose(u, expected, atol=1e-15)
    assert abs(u[1, 1] - complex(-0.28867513459481287, 0.5)) < 1e-15


def test_phase_attaches_to_column():
    u0 = build_unitary((0, 0, 0))
    u = build_unitary((0, 0, 2 * math.pi / 3))
    np.testing.assert_allclose(u[:, 2], u0[:, 2] * ALPHA, atol=1e-15)
    np.testing.assert_allclose(u[:, :2], u0[:, :2], atol=1e-15)


def test_zero_phase_first_projector():
    p1, _, _ = projector_set(build_unitary((0, 0, 0)))
    np.testing.assert_allclose(p1, np.full((3, 3), 1 / 3), atol=1e-15)


def test_random_unitaries_and_projectors(rng):
    eye = np.eye(3)
    for phases in rng.uniform(-10, 10, size=(1000, 3)):
        u = build_unitary(phases)
        np.testing.assert_allclose(u.conj().T @ u, eye, atol=1e-12)
        np.testing.assert_allclose(np.abs(u) ** 2, 1 / 3, atol=1e-12)
        ps = projector_set(u)
        np.testing.assert_allclose(sum(ps), eye, atol=1e-12)
        for a, p in enumerate(ps):
            np.testing.assert_allclose(p, p.conj().T, atol=1e-12)
            np.testing.assert_allclose(p @ p, p, atol=1e-12)
            assert abs(trace(p) - 1) < 1e-12
            for b, other in enumerate(ps):
                if a != b:
                    np.testing.assert_allclose(p @ other, 0, atol=1e-12)


def test_common_phase_shift_leaves_projectors(rng):
    for _ in range(100):
        phases = rng.uniform(0, 2 * math.pi, 3)
        c = rng.uniform(-5, 5)
        before = projector_set(build_unitary(phases))
        after = projector_set(build_unitary(phases + c))
        for p, q in zip(before, after):
            np.testing.assert_allclose(p, q, atol=1e-12)


def test_rejects_non_finite_phase():
    with pytest.raises(ValueError):
        build_unitary((0, math.inf, 0))
    with pytest.raises(ValueError):
        PhaseTriple(0, float("nan"), 0)


def test_projector_set_rejects_non_unitary():
    with pytest.raises(ValueError, match="unitarity"):
        projector_set(2 * build_unitary((0, 0, 0)))

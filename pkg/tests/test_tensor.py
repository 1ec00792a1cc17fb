import math

import numpy as np
import pytest

from qutrit_bell.tensor import (
    ALPHA,
    basis_index,
    cube_root_unity,
    dagger,
    identity,
    ket_bra,
    kron,
    outcome_triple,
    trace,
)


def _random_matrix(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def test_cube_root_unity_values():
    assert cube_root_unity(0) == complex(1, 0)
    assert cube_root_unity(1) == complex(-0.5, 0.8660254037844386)
    assert cube_root_unity(3) == complex(1, 0)
    assert abs(cube_root_unity(1) - ALPHA) < 1e-15


@pytest.mark.parametrize("p", range(-7, 8))
def test_cube_root_unity_periodic(p):
    assert cube_root_unity(p) == cube_root_unity(p % 3)
    assert abs(cube_root_unity(p) - np.exp(2j * math.pi * p / 3)) < 1e-14


def test_roots_sum_to_zero():
    assert abs(sum(cube_root_unity(p) for p in range(3))) < 1e-15


def test_kron_identity_and_shape(rng):
    np.testing.assert_array_equal(kron(identity(3), identity(3)), identity(9))
    assert kron(_random_matrix(rng, 3), _random_matrix(rng, 3)).shape == (9, 9)


def test_kron_basis_bookkeeping():
    op = kron(kron(ket_bra(1), ket_bra(2)), ket_bra(3))
    expected = np.zeros((27, 27))
    idx = basis_index(1, 2, 3)
    expected[idx, idx] = 1
    np.testing.assert_array_equal(op, expected)
    assert idx == 5


def test_kron_entry_rule(rng):
    a, b = _random_matrix(rng, 3), _random_matrix(rng, 3)
    k = kron(a, b)
    for r in range(9):
        for c in range(9):
            assert abs(k[r, c] - a[r // 3, c // 3] * b[r % 3, c % 3]) < 1e-14


def test_kron_rejects_overflow():
    with pytest.raises(ValueError):
        kron(identity(9), identity(9))


def test_kron_associative(rng):
    a, b, c = (_random_matrix(rng, 3) for _ in range(3))
    np.testing.assert_allclose(kron(kron(a, b), c), kron(a, kron(b, c)), atol=1e-12)


def test_dagger(rng):
    np.testing.assert_array_equal(dagger(identity(3)), identity(3))
    a = _random_matrix(rng, 9)
    np.testing.assert_array_equal(dagger(dagger(a)), a)


def test_trace(rng):
    assert trace(identity(27)) == 27
    a, b = _random_matrix(rng, 27), _random_matrix(rng, 27)
    assert abs(trace(a + b) - trace(a) - trace(b)) < 1e-12
    with pytest.raises(ValueError):
        trace(np.ones((3, 9)))


def test_rejects_bad_dimensions_and_nan():
    with pytest.raises(ValueError):
        dagger(np.ones((2, 2)))
    with pytest.raises(ValueError):
        trace(np.full((3, 3), np.nan))


def test_basis_roundtrip():
    for idx in range(27):
        assert basis_index(*outcome_triple(idx)) == idx
    assert basis_index(1, 1, 1) == 0
    assert basis_index(2, 2, 2) == 13
    assert basis_index(3, 3, 3) == 26

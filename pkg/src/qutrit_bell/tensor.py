"""Small dense complex algebra for one, two and three qutrits.

Matrices are plain ``numpy`` complex128 arrays. Only the dimensions
1, 3, 9 and 27 are admitted.

Three-qutrit basis convention: the outcome triple ``(l, m, n)`` with labels
in ``{1, 2, 3}`` sits at flat index ``9(l-1) + 3(m-1) + (n-1)``. Alice is the
first tensor factor and varies slowest.
"""

import cmath
import math

import numpy as np

ALLOWED_DIMS = (1, 3, 9, 27)

ALPHA = cmath.exp(2j * math.pi / 3)

# alpha**p for p = 0, 1, 2, computed once so that equal residues give equal bits
_ROOTS = tuple(
    complex(1.0, 0.0) if p == 0 else complex(-0.5, (1 if p == 1 else -1) * math.sqrt(3) / 2)
    for p in range(3)
)


def cube_root_unity(p):
    """Return ``alpha**p`` with ``alpha = exp(2i*pi/3)``; depends only on ``p % 3``."""
    return _ROOTS[int(p) % 3]


def basis_index(l, m, n):
    """Flat index of the outcome triple ``(l, m, n)``, labels in ``{1, 2, 3}``."""
    for x in (l, m, n):
        if x not in (1, 2, 3):
            raise ValueError(f"outcome label {x!r} not in {{1, 2, 3}}")
    return 9 * (l - 1) + 3 * (m - 1) + (n - 1)


def outcome_triple(index):
    """Inverse of :func:`basis_index`."""
    if not 0 <= index < 27:
        raise ValueError(f"flat index {index} outside 0..26")
    return index // 9 + 1, (index // 3) % 3 + 1, index % 3 + 1


def as_cmatrix(a):
    """Validate ``a`` as a finite complex matrix of admissible shape.

    Returns a read-only complex128 copy.
    """
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    if m.shape[0] not in ALLOWED_DIMS or m.shape[1] not in ALLOWED_DIMS:
        raise ValueError(f"matrix shape {m.shape} outside dimensions {ALLOWED_DIMS}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    m.flags.writeable = False
    return m


def identity(dim):
    if dim not in ALLOWED_DIMS:
        raise ValueError(f"dimension {dim} outside {ALLOWED_DIMS}")
    return as_cmatrix(np.eye(dim))


def ket_bra(l, dim=3):
    """The rank-1 matrix ``|l><l|`` for a 1-based label ``l``."""
    if not 1 <= l <= dim:
        raise ValueError(f"label {l} outside 1..{dim}")
    m = np.zeros((dim, dim), dtype=np.complex128)
    m[l - 1, l - 1] = 1.0
    return as_cmatrix(m)


def kron(a, b):
    """Tensor product; the result may not exceed 27 rows or columns."""
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > 27 or cols > 27:
        raise ValueError(f"kron result {rows}x{cols} exceeds 27")
    return as_cmatrix(np.kron(a, b))


def dagger(a):
    """Conjugate transpose."""
    return as_cmatrix(np.conj(as_cmatrix(a)).T)


def trace(a):
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"trace of non-square matrix {a.shape}")
    return complex(np.trace(a))

"""Unbiased symmetric six-port beamsplitter (tritter) and its projectors."""

import math
from dataclasses import dataclass

import numpy as np

from .tensor import as_cmatrix, cube_root_unity, dagger, ket_bra

UNITARITY_TOL = 1e-10

# DFT part of the tritter: alpha^((k-1)(l-1)) / sqrt(3), rows = output ports k
_DFT = np.array(
    [[cube_root_unity(k * l) for l in range(3)] for k in range(3)],
    dtype=np.complex128,
) / math.sqrt(3)


@dataclass(frozen=True)
class PhaseTriple:
    """Phase shifter settings in front of the three input ports, in radians."""

    phi1: float
    phi2: float
    phi3: float

    def __post_init__(self):
        for name in ("phi1", "phi2", "phi3"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ValueError(f"{name} is not a number: {value!r}") from None
            if not math.isfinite(value):
                raise ValueError(f"{name} is not finite: {value!r}")
            object.__setattr__(self, name, value)

    def __iter__(self):
        return iter((self.phi1, self.phi2, self.phi3))

    def as_tuple(self):
        return (self.phi1, self.phi2, self.phi3)


def build_unitary(phases):
    """Tritter matrix ``U[k, l] = alpha^((k-1)(l-1)) exp(i phi_l) / sqrt(3)``.

    The phase of input port ``l`` multiplies column ``l``.
    """
    if not isinstance(phases, PhaseTriple):
        phases = PhaseTriple(*phases)
    column_phases = np.exp(1j * np.array(phases.as_tuple()))
    return as_cmatrix(_DFT * column_phases[np.newaxis, :])


def is_unitary(u, tol=UNITARITY_TOL):
    u = np.asarray(u)
    if u.shape != (3, 3):
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(3))) <= tol)


def projector_set(u):
    """Return ``(P1, P2, P3)`` with ``P_l = U^dagger |l><l| U``.

    Raises ValueError when ``u`` is not unitary to within 1e-10.
    """
    u = as_cmatrix(u)
    if not is_unitary(u):
        raise ValueError("six-port matrix fails the unitarity check")
    ud = dagger(u)
    return tuple(as_cmatrix(ud @ ket_bra(l) @ u) for l in (1, 2, 3))

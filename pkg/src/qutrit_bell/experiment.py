"""Three observers, two tritter settings each, measuring a (noisy) three-qutrit state.

Setting indices ``i, j, k`` and outcome labels ``l, m, n`` are 1-based in the
public ``at`` accessors. The backing arrays are 0-based: a probability table
has shape ``(2, 2, 2, 3, 3, 3)`` and a correlation table shape ``(2, 2, 2)``.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .sixport import PhaseTriple, build_unitary, projector_set
from .tensor import ALPHA, cube_root_unity, identity, kron, trace

NORM_TOL = 1e-12
GROUPING_TOL = 1e-10

_LABELS = np.arange(1, 4)
_LABEL_SUM = _LABELS[:, None, None] + _LABELS[None, :, None] + _LABELS[None, None, :]
# residue class masks of l+m+n (mod 3), indexed by residue 0, 1, 2
RESIDUE_MASKS = tuple((_LABEL_SUM % 3) == g for g in range(3))
# alpha^(l+m+n) over the 27 outcome triples
OUTCOME_PHASES = np.vectorize(cube_root_unity, otypes=[np.complex128])(_LABEL_SUM)

SETTING_TRIPLES = tuple((i, j, k) for i in (1, 2) for j in (1, 2) for k in (1, 2))


class GroupingError(ValueError):
    """The nine probabilities of a residue class are not equal."""


def _readonly(a):
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (27,):
            raise ValueError(f"a three-qutrit state needs 27 amplitudes, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("state has non-finite amplitudes")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: squared norm {norm2!r}")
        object.__setattr__(self, "amplitudes", _readonly(amps))

    def tensor(self):
        """Amplitudes as a ``(3, 3, 3)`` array (Alice, Bob, Celine)."""
        return self.amplitudes.reshape(3, 3, 3)

    def density_matrix(self):
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True, eq=False)
class NoisyState:
    """``rho(F) = (1 - F) |psi><psi| + F I / 27``."""

    pure: PureState
    noise_fraction: float = 0.0

    def __post_init__(self):
        f = float(self.noise_fraction)
        if not 0.0 <= f <= 1.0:
            raise ValueError(f"noise fraction {f!r} outside [0, 1]")
        object.__setattr__(self, "noise_fraction", f)

    def density_matrix(self):
        f = self.noise_fraction
        return (1 - f) * self.pure.density_matrix() + f / 27 * identity(27)


def _pair(triples, who):
    triples = tuple(t if isinstance(t, PhaseTriple) else PhaseTriple(*t) for t in triples)
    if len(triples) != 2:
        raise ValueError(f"{who} needs exactly two phase triples, got {len(triples)}")
    return triples


@dataclass(frozen=True)
class MeasurementSettings:
    """Two phase triples per observer; ``alice[0]`` is Alice's first setting."""

    alice: tuple
    bob: tuple
    celine: tuple

    def __post_init__(self):
        for who in ("alice", "bob", "celine"):
            object.__setattr__(self, who, _pair(getattr(self, who), who))

    @classmethod
    def from_phases(cls, phases):
        """Build from a flat sequence of 18 angles, ordered alice, bob, celine."""
        p = np.asarray(phases, dtype=float).reshape(3, 2, 3)
        return cls(*(tuple(PhaseTriple(*t) for t in party) for party in p))

    def as_array(self):
        """Phases as a ``(3, 2, 3)`` array: party, setting, port."""
        return np.array([[t.as_tuple() for t in party] for party in self.parties()])

    def parties(self):
        return (self.alice, self.bob, self.celine)

    def unitaries(self):
        """Six tritter matrices, indexed ``[party][setting]``."""
        return tuple(tuple(build_unitary(t) for t in party) for party in self.parties())


@dataclass(frozen=True, eq=False)
class ProbabilityTable:
    """The 216 joint probabilities ``W(i, j, k; l, m, n)``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (2, 2, 2, 3, 3, 3):
            raise ValueError(f"probability table must have shape (2,2,2,3,3,3), got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("probability table has non-finite entries")
        if v.min() < -1e-12 or v.max() > 1 + 1e-12:
            raise ValueError("probability table entries outside [0, 1]")
        sums = v.reshape(8, 27).sum(axis=1)
        if np.max(np.abs(sums - 1.0)) > 1e-12:
            raise ValueError(f"a setting triple is not normalized: sums {sums}")
        object.__setattr__(self, "values", _readonly(v))

    def at(self, i, j, k, l, m, n):
        return float(self.values[i - 1, j - 1, k - 1, l - 1, m - 1, n - 1])

    def block(self, i, j, k):
        """The ``(3, 3, 3)`` outcome distribution of one setting triple."""
        return self.values[i - 1, j - 1, k - 1]


@dataclass(frozen=True, eq=False)
class CorrelationTable:
    """Complex correlations ``Q_ijk``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128)
        if v.shape != (2, 2, 2):
            raise ValueError(f"correlation table must have shape (2,2,2), got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("correlation table has non-finite entries")
        if np.max(np.abs(v)) > 1 + 1e-12:
            raise ValueError("correlation with modulus above 1")
        object.__setattr__(self, "values", _readonly(v))

    def at(self, i, j, k):
        return complex(self.values[i - 1, j - 1, k - 1])


class GroupTriple(NamedTuple):
    """Common probability in residue class 1, 2 and 0 (in that order)."""

    w1: float
    w2: float
    w3: float


def ghz_state():
    """``(|111> + |222> + |333>) / sqrt(3)``."""
    amps = np.zeros(27, dtype=np.complex128)
    amps[[0, 13, 26]] = 1 / math.sqrt(3)
    return PureState(amps)


def _as_noisy(state, noise=None):
    if isinstance(state, NoisyState):
        if noise is not None:
            raise ValueError("noise given twice")
        return state
    if isinstance(state, PureState):
        return NoisyState(state, 0.0 if noise is None else noise)
    raise TypeError(f"expected PureState or NoisyState, got {type(state).__name__}")


def pure_probabilities(psi, settings):
    """Noiseless joint probabilities as a raw ``(2,2,2,3,3,3)`` array.

    Uses ``<psi| P_l x Q_m x R_n |psi> = |(U_A x U_B x U_C psi)_lmn|^2``.
    """
    ua, ub, uc = (np.stack(u) for u in settings.unitaries())
    amps = np.einsum("ila,jmb,knc,abc->ijklmn", ua, ub, uc, psi.tensor(), optimize=True)
    return np.abs(amps) ** 2


def _exact_probabilities(state, settings):
    rho = state.density_matrix()
    projectors = [[projector_set(u) for u in party] for party in settings.unitaries()]
    out = np.empty((2, 2, 2, 3, 3, 3))
    for i, j, k in SETTING_TRIPLES:
        for l in range(3):
            for m in range(3):
                for n in range(3):
                    op = kron(kron(projectors[0][i - 1][l], projectors[1][j - 1][m]),
                              projectors[2][k - 1][n])
                    out[i - 1, j - 1, k - 1, l, m, n] = trace(rho @ op).real
    return out


def joint_probabilities(state, settings, noise=None, exact=False):
    """All 216 probabilities ``Tr(rho P^i_l x Q^j_m x R^k_n)``.

    ``state`` is a :class:`PureState` (optionally with ``noise``) or a
    :class:`NoisyState`. The default path mixes the pure-state probabilities
    with the uniform 1/27; ``exact=True`` builds the 27x27 density operator
    and the tensor-product projectors instead.
    """
    state = _as_noisy(state, noise)
    if not isinstance(settings, MeasurementSettings):
        raise TypeError("settings must be MeasurementSettings")
    if exact:
        values = _exact_probabilities(state, settings)
    else:
        f = state.noise_fraction
        values = (1 - f) * pure_probabilities(state.pure, settings) + f / 27
    return ProbabilityTable(values)


def group_probabilities(table, i, j, k, tol=GROUPING_TOL):
    """Common values of the three residue classes of one setting triple.

    Raises GroupingError when some class holds unequal probabilities, which
    happens for states without the GHZ symmetry.
    """
    block = table.block(i, j, k)
    spreads = {}
    means = {}
    for g in (1, 2, 0):
        members = block[RESIDUE_MASKS[g]]
        spreads[g] = float(members.max() - members.min())
        means[g] = float(members.mean())
    worst = max(spreads, key=spreads.get)
    if spreads[worst] > tol:
        raise GroupingError(
            f"residue class {worst} (mod 3) of setting ({i},{j},{k}) spreads "
            f"by {spreads[worst]:.3g} > {tol:g}"
        )
    return GroupTriple(means[1], means[2], means[0])


def correlation_from_probabilities(table):
    """``Q_ijk = sum_lmn alpha^(l+m+n) W(i,j,k; l,m,n)``; any table."""
    q = np.einsum("ijklmn,lmn->ijk", table.values, OUTCOME_PHASES)
    return CorrelationTable(q)


def correlation_closed_form(settings):
    """Correlations of the GHZ state computed directly from the phase differences.

    ``Q_ijk = (1/3) sum_{(a,b) in (1,2),(2,3),(3,1)} exp(i(dphi_ab + dpsi_ab + ddelta_ab))``
    where each difference is taken within the observer's own setting.
    """
    return CorrelationTable(closed_form_values(settings.as_array()))


def closed_form_values(phases):
    """Vectorised core of :func:`correlation_closed_form`.

    ``phases`` has shape ``(..., 3, 2, 3)`` (party, setting, port); returns
    shape ``(..., 2, 2, 2)``.
    """
    phases = np.asarray(phases, dtype=float)
    diff = phases - np.roll(phases, -1, axis=-1)  # port a minus port a+1 (cyclic)
    a = diff[..., 0, :, None, None, :]
    b = diff[..., 1, None, :, None, :]
    c = diff[..., 2, None, None, :, :]
    return np.exp(1j * (a + b + c)).sum(axis=-1) / 3


def probabilities_from_correlation(q):
    """Residue-class probabilities ``(W1, W2, W3)`` implied by one correlation value."""
    q = complex(q)
    if abs(q) > 1 + 1e-12:
        raise ValueError(f"|q| = {abs(q)!r} exceeds 1")
    s3 = math.sqrt(3)
    w1 = (1 - q.real + s3 * q.imag) / 27
    w2 = (1 - q.real - s3 * q.imag) / 27
    return GroupTriple(w1, w2, 1 / 9 - w1 - w2)


def scale_correlations(q, noise):
    """Correlations after mixing in a fraction ``noise`` of white noise."""
    f = float(noise)
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"noise fraction {f!r} outside [0, 1]")
    return CorrelationTable((1 - f) * q.values)


__all__ = [
    "ALPHA",
    "CorrelationTable",
    "GroupTriple",
    "GroupingError",
    "MeasurementSettings",
    "NoisyState",
    "ProbabilityTable",
    "PureState",
    "SETTING_TRIPLES",
    "correlation_closed_form",
    "correlation_from_probabilities",
    "ghz_state",
    "group_probabilities",
    "joint_probabilities",
    "probabilities_from_correlation",
    "scale_correlations",
]

"""The three-qutrit Clauser-Horne inequality, its correlation form and its classical bound.

A local deterministic strategy (a vertex of the local polytope) fixes the
outcome of every observable: ``(l1, l2, m1, m2, n1, n2)`` with each label in
``{1, 2, 3}``. Vertices are numbered by their flat index with ``l1`` slowest
and ``n2`` fastest, which is also the export order of the coefficient ledger.
"""

import itertools
from collections import Counter
from typing import NamedTuple

import numpy as np

from .experiment import (
    CorrelationTable,
    ProbabilityTable,
    RESIDUE_MASKS,
    correlation_from_probabilities,
)
from .tensor import cube_root_unity

CLASSICAL_BOUND = 3


class Term(NamedTuple):
    coefficient: int
    settings: tuple
    residue: int


# -G_221 - G_111 + 2 G_122 + G'_121 - G'_212 + G''_211 + G''_222 + G''_112 <= 3
# G sums residue 1, G' residue 0, G'' residue 2 of l+m+n
TERMS = (
    Term(-1, (2, 2, 1), 1),
    Term(-1, (1, 1, 1), 1),
    Term(+2, (1, 2, 2), 1),
    Term(+1, (1, 2, 1), 0),
    Term(-1, (2, 1, 2), 0),
    Term(+1, (2, 1, 1), 2),
    Term(+1, (2, 2, 2), 2),
    Term(+1, (1, 1, 2), 2),
)


class JointAssignment(NamedTuple):
    l1: int
    l2: int
    m1: int
    m2: int
    n1: int
    n2: int

    @classmethod
    def validated(cls, *labels):
        if len(labels) == 1:
            labels = tuple(labels[0])
        if len(labels) != 6 or any(x not in (1, 2, 3) for x in labels):
            raise ValueError(f"joint assignment needs six labels in {{1,2,3}}, got {labels!r}")
        return cls(*(int(x) for x in labels))

    @property
    def index(self):
        idx = 0
        for x in self:
            idx = 3 * idx + (x - 1)
        return idx

    def outcomes(self, i, j, k):
        """Outcome triple this strategy produces for setting triple ``(i, j, k)``."""
        return (self[i - 1], self[2 + j - 1], self[4 + k - 1])


ASSIGNMENTS = tuple(JointAssignment(*a) for a in itertools.product((1, 2, 3), repeat=6))


def gamma(table, i, j, k, residue):
    """Sum of ``W(i,j,k; l,m,n)`` over ``l + m + n = residue (mod 3)``."""
    return float(table.block(i, j, k)[RESIDUE_MASKS[residue]].sum())


def bell_probability_form(table):
    """Left-hand side of the probability inequality; local models give at most 3."""
    return sum(t.coefficient * gamma(table, *t.settings, t.residue) for t in TERMS)


def bell_correlation_form(q):
    """``Re[Q121 - Q212 + a(Q112 + Q211 + Q222) + a^2(2 Q122 - Q111 - Q221)]``, ``a = exp(2i pi/3)``."""
    if isinstance(q, CorrelationTable):
        q = q.at
    else:
        values = np.asarray(q)
        q = lambda i, j, k: values[i - 1, j - 1, k - 1]  # noqa: E731
    a, a2 = cube_root_unity(1), cube_root_unity(2)
    total = (
        q(1, 2, 1) - q(2, 1, 2)
        + a * (q(1, 1, 2) + q(2, 1, 1) + q(2, 2, 2))
        + a2 * (2 * q(1, 2, 2) - q(1, 1, 1) - q(2, 2, 1))
    )
    return float(np.real(total))


def correlation_form_values(q):
    """:func:`bell_correlation_form` over a stack of ``(..., 2, 2, 2)`` correlation arrays."""
    q = np.asarray(q)
    a, a2 = cube_root_unity(1), cube_root_unity(2)
    total = (
        q[..., 0, 1, 0] - q[..., 1, 0, 1]
        + a * (q[..., 0, 0, 1] + q[..., 1, 0, 0] + q[..., 1, 1, 1])
        + a2 * (2 * q[..., 0, 1, 1] - q[..., 0, 0, 0] - q[..., 1, 1, 0])
    )
    return np.real(total)


def vertex_table(assignment):
    """Point-mass probability table of a deterministic strategy."""
    a = JointAssignment.validated(assignment)
    values = np.zeros((2, 2, 2, 3, 3, 3))
    for i, j, k in itertools.product((1, 2), repeat=3):
        l, m, n = a.outcomes(i, j, k)
        values[i - 1, j - 1, k - 1, l - 1, m - 1, n - 1] = 1.0
    return ProbabilityTable(values)


def vertex_score(assignment):
    """Integer value of the inequality at a deterministic strategy."""
    a = JointAssignment.validated(assignment)
    return sum(
        t.coefficient
        for t in TERMS
        if sum(a.outcomes(*t.settings)) % 3 == t.residue
    )


def vertex_value(assignment):
    """Inequality value at a deterministic strategy, evaluated through its point-mass table."""
    return bell_probability_form(vertex_table(assignment))


def vertex_correlations(assignment):
    """Correlations ``Q_ijk = alpha^(l_i + m_j + n_k)`` of a deterministic strategy."""
    a = JointAssignment.validated(assignment)
    q = np.empty((2, 2, 2), dtype=np.complex128)
    for i, j, k in itertools.product((1, 2), repeat=3):
        q[i - 1, j - 1, k - 1] = cube_root_unity(sum(a.outcomes(i, j, k)))
    return CorrelationTable(q)


def expand_coefficients():
    """Coefficient of every joint probability once the marginals are expanded.

    Each marginal ``W(a^i_l, b^j_m, c^k_n)`` is the sum of the joint
    distribution over the three unobserved labels, so a term contributes its
    coefficient to every strategy whose outcomes at that term's settings land
    in its residue class. Returns a dict keyed by :class:`JointAssignment` in
    flat-index order; values are integers.
    """
    return {a: vertex_score(a) for a in ASSIGNMENTS}


def check_ledger(ledger):
    """Raise ValueError unless ``ledger`` has the expected 729 entries, values and sum."""
    if len(ledger) != 729 or set(ledger) != set(ASSIGNMENTS):
        raise ValueError(f"ledger must cover all 729 assignments, has {len(ledger)}")
    bad = {v for v in ledger.values() if v not in (-3, 0, 3)}
    if bad:
        raise ValueError(f"ledger holds coefficients outside {{-3, 0, 3}}: {sorted(bad)}")
    total = sum(ledger.values())
    if total != 729:
        raise ValueError(f"ledger coefficients sum to {total}, expected 729")


def coefficient_histogram(ledger):
    return dict(sorted(Counter(ledger.values()).items()))


class ClassicalMaximum(NamedTuple):
    value: float
    maximizers: list


def classical_maximum(form="prob"):
    """Maximum of the inequality over all 729 deterministic strategies.

    ``form="prob"`` scores each vertex in integer arithmetic; ``form="corr"``
    scores the correlation form at ``Q_ijk = alpha^(l_i + m_j + n_k)`` and
    collects maximizers within 1e-12 of the maximum.
    """
    if form == "prob":
        scores = [vertex_score(a) for a in ASSIGNMENTS]
        best = max(scores)
        return ClassicalMaximum(best, [a for a, s in zip(ASSIGNMENTS, scores) if s == best])
    if form == "corr":
        scores = [bell_correlation_form(vertex_correlations(a)) for a in ASSIGNMENTS]
        best = max(scores)
        return ClassicalMaximum(
            best, [a for a, s in zip(ASSIGNMENTS, scores) if abs(s - best) <= 1e-12]
        )
    raise ValueError(f"unknown form {form!r}; expected 'prob' or 'corr'")


def _check_perm(perm):
    perm = tuple(perm)
    if sorted(perm) != [1, 2, 3]:
        raise ValueError(f"not a permutation of (1, 2, 3): {perm!r}")
    return perm


def relabel_assignment(assignment, outcome_perms, swap_settings):
    """Image of one strategy under a relabeling.

    ``outcome_perms`` holds six permutations of ``(1, 2, 3)`` in component
    order ``l1, l2, m1, m2, n1, n2``; ``perm[x - 1]`` is the new label of
    outcome ``x``. ``swap_settings[p]`` then exchanges party ``p``'s two
    observables, carrying their relabeled outcomes with them.
    """
    out = []
    for p in range(3):
        first = outcome_perms[2 * p][assignment[2 * p] - 1]
        second = outcome_perms[2 * p + 1][assignment[2 * p + 1] - 1]
        out.extend((second, first) if swap_settings[p] else (first, second))
    return JointAssignment(*out)


def relabel_ledger(ledger, outcome_perms, swap_settings=(False, False, False)):
    """Ledger of the relabeled inequality: ``new[R(a)] = ledger[a]``."""
    perms = [_check_perm(p) for p in outcome_perms]
    if len(perms) != 6:
        raise ValueError(f"need six outcome permutations, got {len(perms)}")
    swaps = tuple(bool(s) for s in swap_settings)
    if len(swaps) != 3:
        raise ValueError(f"need three swap flags, got {len(swaps)}")
    relabeled = {relabel_assignment(a, perms, swaps): c for a, c in ledger.items()}
    return {a: relabeled[a] for a in ASSIGNMENTS}


def ledger_maximum(ledger):
    return max(ledger.values())


def affine_residual(table):
    """``prob_form - (1 + 2/3 corr_form)``; zero for every normalised table."""
    q = correlation_from_probabilities(table)
    return bell_probability_form(table) - (1 + 2 / 3 * bell_correlation_form(q))

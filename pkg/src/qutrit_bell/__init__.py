"""Clauser-Horne Bell inequality for three qutrits measured with tritters."""

from .bell import (
    ASSIGNMENTS,
    CLASSICAL_BOUND,
    TERMS,
    JointAssignment,
    bell_correlation_form,
    bell_probability_form,
    classical_maximum,
    expand_coefficients,
    relabel_ledger,
    vertex_value,
)
from .experiment import (
    CorrelationTable,
    GroupTriple,
    GroupingError,
    MeasurementSettings,
    NoisyState,
    ProbabilityTable,
    PureState,
    correlation_closed_form,
    correlation_from_probabilities,
    ghz_state,
    group_probabilities,
    joint_probabilities,
    probabilities_from_correlation,
    scale_correlations,
)
from .optimizer import (
    ConsistencyError,
    SearchConfig,
    SearchResult,
    ThresholdResult,
    noise_threshold,
    optimize_settings,
    paper_settings,
)
from .sixport import PhaseTriple, build_unitary, projector_set
from .tensor import ALPHA, cube_root_unity, dagger, kron, trace

__version__ = "0.1.0"

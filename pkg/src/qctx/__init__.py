"""qctx: a laboratory for two-particle spin-1 contextuality tests.

Builds spin-1 observables, maximal Kochen-Specker operators and their
interlinked measurement contexts, the two-particle singlet state, exact
Born-rule joint distributions, and deterministic coincidence samples; ships
its own acceptance suite (``qctx report``).
"""

from ._kernels import BACKEND
from .experiment import (
    CoincidenceTally,
    JointDistribution,
    contextuality_report,
    expectation_closed_form,
    expectation_trace,
    interlinked_distribution,
    joint_distribution,
    opposite_outcomes_check,
    rotation_invariance_check,
    sample,
    sample_split,
    shared_outcome_uniqueness,
    singlet_state,
)
from .ks import (
    Context,
    KSLabels,
    KSOperator,
    c_prime_blue,
    c_red,
    commuting_within_context,
    context_of,
    ks_operator,
)
from .linalg import (
    EigenSystem,
    adjoint,
    hermitian_eigen,
    kron,
    projector,
    unitary_from_generator,
)
from .logic import (
    GDLParseError,
    GreechieDiagram,
    diagram_from_operators,
    parse_diagram,
    serialize_diagram,
    validate_diagram,
)
from .spin import Direction, SpinObservable, rotation_operator, spin_observable, spin_squared
from .tolerances import DEFAULT, Tolerances

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CoincidenceTally",
    "Context",
    "DEFAULT",
    "Direction",
    "EigenSystem",
    "GDLParseError",
    "GreechieDiagram",
    "JointDistribution",
    "KSLabels",
    "KSOperator",
    "SpinObservable",
    "Tolerances",
    "adjoint",
    "c_prime_blue",
    "c_red",
    "commuting_within_context",
    "context_of",
    "contextuality_report",
    "diagram_from_operators",
    "expectation_closed_form",
    "expectation_trace",
    "hermitian_eigen",
    "interlinked_distribution",
    "joint_distribution",
    "kron",
    "ks_operator",
    "opposite_outcomes_check",
    "parse_diagram",
    "projector",
    "rotation_invariance_check",
    "rotation_operator",
    "sample",
    "sample_split",
    "serialize_diagram",
    "shared_outcome_uniqueness",
    "singlet_state",
    "spin_observable",
    "spin_squared",
    "unitary_from_generator",
    "validate_diagram",
    "__version__",
]

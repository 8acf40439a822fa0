"""Two-particle spin-1 singlet experiment.

Builds the singlet state, computes exact Born-rule joint distributions for a
pair of measurement contexts, evaluates the two-sided expectation value both
as a trace and in closed form, checks the coincidence structure of the two
interlinked contexts, and samples coincidences with a pinned deterministic
generator (splitmix64).

Cell conventions: rows index side-1 outcomes, columns side-2 outcomes, both
in the label order of their contexts.  For the interlinked presets the
shared ray carries the ``first`` label on both sides, so the shared cell is
(0, 0), the forbidden cross cells are (0,1), (0,2), (1,0), (2,0), and the
allowed cross cells are the remaining four.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from ._kernels import sample_counts, splitmix64_next
from .ks import (
    Context,
    KSLabels,
    KSOperator,
    c_prime_blue,
    c_red,
    context_from_matrix,
    context_of,
)
from .spin import Direction, rotation_operator, spin_observable
from .tolerances import DEFAULT, Tolerances

SAMPLER_ALGORITHM = "splitmix64"

SHARED_CELL = (0, 0)
FORBIDDEN_CELLS = ((0, 1), (0, 2), (1, 0), (2, 0))
ALLOWED_CROSS_CELLS = ((1, 1), (1, 2), (2, 1), (2, 2))


def singlet_state() -> np.ndarray:
    """The two-particle spin-1 singlet as a 9-component Kronecker vector.

    Equal to (-|00> + |-+> + |+->)/sqrt(3) in the (+, 0, -) product basis,
    i.e. (0, 0, 1, 0, -1, 0, 1, 0, 0)/sqrt(3).
    """
    amp = 1.0 / math.sqrt(3.0)
    vec = np.zeros(9, dtype=complex)
    vec[2] = amp
    vec[4] = -amp
    vec[6] = amp
    vec.setflags(write=False)
    return vec


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Exact joint outcome probabilities for a two-sided measurement."""

    side1_labels: tuple[float, float, float]
    side2_labels: tuple[float, float, float]
    probabilities: np.ndarray  # shape (3, 3), row = side-1 outcome

    def cell(self, i: int, j: int) -> float:
        return float(self.probabilities[i, j])

    def marginal_side1(self) -> np.ndarray:
        return self.probabilities.sum(axis=1)

    def marginal_side2(self) -> np.ndarray:
        return self.probabilities.sum(axis=0)

    def label_expectation(self) -> float:
        """Sum of P(i, j) * label1_i * label2_j."""
        l1 = np.asarray(self.side1_labels)
        l2 = np.asarray(self.side2_labels)
        return float(l1 @ self.probabilities @ l2)

    def to_dict(self) -> dict:
        return {
            "side1_labels": list(self.side1_labels),
            "side2_labels": list(self.side2_labels),
            "probabilities": [[float(p) for p in row] for row in self.probabilities],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["side1_label", "side2_label", "probability"])
        for i, l1 in enumerate(self.side1_labels):
            for j, l2 in enumerate(self.side2_labels):
                writer.writerow([repr(l1), repr(l2), repr(float(self.probabilities[i, j]))])
        return buf.getvalue()


@dataclass(frozen=True, eq=False)
class CoincidenceTally:
    """Empirical coincidence counts from the deterministic sampler."""

    shots: int
    seed: int
    counts: np.ndarray  # shape (3, 3) of nonnegative integers
    side1_labels: tuple[float, float, float]
    side2_labels: tuple[float, float, float]
    algorithm: str = SAMPLER_ALGORITHM
    streams: int = 1

    def frequencies(self) -> np.ndarray:
        return self.counts / float(self.shots)

    def as_distribution(self) -> JointDistribution:
        """Empirical frequencies packaged as a distribution."""
        probs = self.frequencies()
        probs.setflags(write=False)
        return JointDistribution(
            side1_labels=self.side1_labels,
            side2_labels=self.side2_labels,
            probabilities=probs,
        )

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": int(self.seed),
            "streams": int(self.streams),
            "shots": int(self.shots),
            "side1_labels": list(self.side1_labels),
            "side2_labels": list(self.side2_labels),
            "counts": [[int(c) for c in row] for row in self.counts],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["side1_label", "side2_label", "count"])
        for i, l1 in enumerate(self.side1_labels):
            for j, l2 in enumerate(self.side2_labels):
                writer.writerow([repr(l1), repr(l2), int(self.counts[i, j])])
        return buf.getvalue()


def joint_distribution(
    c1: Context, c2: Context, state: np.ndarray, tol: Tolerances = DEFAULT
) -> JointDistribution:
    """Born-rule joint distribution P(i, j) = <s| P_i (x) Q_j |s>.

    P_i and Q_j are the rank-1 projectors of the two contexts.  Entries with
    imaginary residues above ``tol.imaginary_residual`` or negative beyond
    ``tol.negative_probability`` raise; smaller negatives clip to zero.
    """
    state = np.asarray(state, dtype=complex)
    probs = np.zeros((3, 3))
    proj1 = c1.projectors()
    proj2 = c2.projectors()
    for i in range(3):
        for j in range(3):
            op = linalg.kron(proj1[i], proj2[j])
            value = complex(state.conj() @ op @ state)
            if abs(value.imag) > tol.imaginary_residual:
                raise ValueError(
                    f"joint probability cell ({i},{j}) has imaginary residue "
                    f"{value.imag:.3e}"
                )
            p = value.real
            if p < -tol.negative_probability:
                raise ValueError(
                    f"joint probability cell ({i},{j}) is negative: {p:.3e}"
                )
            probs[i, j] = 0.0 if p < 0.0 else p
    total = float(probs.sum())
    if abs(total - 1.0) > tol.probability_sum:
        raise ValueError(f"joint probabilities sum to {total!r}, not 1")
    probs.setflags(write=False)
    return JointDistribution(
        side1_labels=c1.labels, side2_labels=c2.labels, probabilities=probs
    )


def expectation_trace(
    op1: KSOperator, op2: KSOperator, state: np.ndarray, tol: Tolerances = DEFAULT
) -> float:
    """Tr{ |s><s| . (op1 (x) op2) }, evaluated numerically."""
    state = np.asarray(state, dtype=complex)
    rho = np.outer(state, state.conj())
    value = complex(np.trace(rho @ linalg.kron(op1.matrix, op2.matrix)))
    if abs(value.imag) > tol.imaginary_residual:
        raise ValueError(f"expectation has imaginary residue {value.imag:.3e}")
    return value.real


def expectation_closed_form(l1: KSLabels, l2: KSLabels) -> float:
    """Closed form of the singlet expectation for two maximal operators:
    (1/6) [ 2 f1 f2 + (s1 + t1)(s2 + t2) ].
    """
    f1, s1, t1 = l1.as_tuple()
    f2, s2, t2 = l2.as_tuple()
    return (2.0 * f1 * f2 + (s1 + t1) * (s2 + t2)) / 6.0


VERDICT_CONFIRMED = "non-contextual prediction confirmed"
VERDICT_VIOLATED = "non-contextual prediction violated"


@dataclass(frozen=True, eq=False)
class ContextualityReport:
    """Forbidden-cell audit of an interlinked-context joint distribution."""

    forbidden_cells: tuple[tuple[int, int], ...]
    forbidden_probabilities: tuple[float, float, float, float]
    shared_probability: float
    allowed_cross_probabilities: tuple[float, float, float, float]
    threshold: float
    confirmed: bool

    @property
    def verdict(self) -> str:
        return VERDICT_CONFIRMED if self.confirmed else VERDICT_VIOLATED

    def to_dict(self) -> dict:
        return {
            "forbidden_cells": [list(c) for c in self.forbidden_cells],
            "forbidden_probabilities": list(self.forbidden_probabilities),
            "shared_cell": list(SHARED_CELL),
            "shared_probability": self.shared_probability,
            "allowed_cross_cells": [list(c) for c in ALLOWED_CROSS_CELLS],
            "allowed_cross_probabilities": list(self.allowed_cross_probabilities),
            "threshold": self.threshold,
            "confirmed": self.confirmed,
            "verdict": self.verdict,
        }


def contextuality_report(
    d: JointDistribution, tol: Tolerances = DEFAULT
) -> ContextualityReport:
    """Audit the four forbidden cells of an interlinked-context distribution.

    The non-contextual prediction is that outcomes pairing the shared ray on
    one side with a non-shared ray on the other never occur; the verdict is
    confirmed iff all four such cells fall below ``tol.forbidden_cell``.
    """
    forbidden = tuple(d.cell(i, j) for i, j in FORBIDDEN_CELLS)
    allowed = tuple(d.cell(i, j) for i, j in ALLOWED_CROSS_CELLS)
    confirmed = all(p < tol.forbidden_cell for p in forbidden)
    return ContextualityReport(
        forbidden_cells=FORBIDDEN_CELLS,
        forbidden_probabilities=forbidden,
        shared_probability=d.cell(*SHARED_CELL),
        allowed_cross_probabilities=allowed,
        threshold=tol.forbidden_cell,
        confirmed=confirmed,
    )


@dataclass(frozen=True, eq=False)
class UniquenessReport:
    """Conditional distributions across the shared ray of interlinked contexts.

    When one side fires on the shared ray, the other side must fire on its
    shared ray with certainty; both conditionals must be degenerate.
    """

    side1_conditional: tuple[float, float, float]
    side2_conditional: tuple[float, float, float]
    passed: bool

    def to_dict(self) -> dict:
        return {
            "side1_conditional": list(self.side1_conditional),
            "side2_conditional": list(self.side2_conditional),
            "passed": self.passed,
        }


def shared_outcome_uniqueness(
    d: JointDistribution, tol: Tolerances = DEFAULT
) -> UniquenessReport:
    """Check that the shared-ray outcome on one side forces it on the other."""
    row = d.probabilities[0, :]
    col = d.probabilities[:, 0]
    cond_given_side1 = tuple(float(x) for x in row / row.sum())
    cond_given_side2 = tuple(float(x) for x in col / col.sum())
    passed = (
        abs(cond_given_side1[0] - 1.0) < tol.forbidden_cell
        and abs(cond_given_side2[0] - 1.0) < tol.forbidden_cell
    )
    return UniquenessReport(
        side1_conditional=cond_given_side1,
        side2_conditional=cond_given_side2,
        passed=passed,
    )


def sample(d: JointDistribution, shots: int, seed: int) -> CoincidenceTally:
    """Draw coincidences by inverse-CDF sampling over the 9 cells.

    Cells are ordered row-major for the CDF.  The generator is splitmix64
    seeded with ``seed``; identical arguments give identical tallies on
    every platform.
    """
    if shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots}")
    cdf = np.cumsum(d.probabilities.ravel())
    counts = sample_counts(cdf, int(shots), int(seed))
    counts = counts.reshape(3, 3)
    counts.setflags(write=False)
    return CoincidenceTally(
        shots=int(shots),
        seed=int(seed),
        counts=counts,
        side1_labels=d.side1_labels,
        side2_labels=d.side2_labels,
    )


def derive_stream_seed(seed: int, stream_index: int) -> int:
    """Deterministic per-stream seed: the (index+1)-th splitmix64 output."""
    state = seed
    out = 0
    for _ in range(stream_index + 1):
        state, out = splitmix64_next(state)
    return out


def sample_split(
    d: JointDistribution, shots: int, seed: int, streams: int
) -> CoincidenceTally:
    """Split ``shots`` across derived seed streams and merge the tallies.

    The split schedule is deterministic (earlier streams absorb the
    remainder), so the merged tally is reproducible no matter how the
    per-stream work is scheduled.
    """
    if streams < 1:
        raise ValueError(f"streams must be a positive integer, got {streams}")
    if shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots}")
    base, extra = divmod(int(shots), streams)
    total = np.zeros((3, 3), dtype=np.int64)
    for k in range(streams):
        piece = base + (1 if k < extra else 0)
        if piece == 0:
            continue
        part = sample(d, piece, derive_stream_seed(int(seed), k))
        total += part.counts
    total.setflags(write=False)
    return CoincidenceTally(
        shots=int(shots),
        seed=int(seed),
        counts=total,
        side1_labels=d.side1_labels,
        side2_labels=d.side2_labels,
        streams=streams,
    )


@dataclass(frozen=True, eq=False)
class OppositeOutcomesReport:
    """Same-direction measurement audit: outcomes must be exactly opposite."""

    direction: Direction
    non_opposite_mass: float
    opposite_probabilities: tuple[float, float, float]
    passed: bool

    def to_dict(self) -> dict:
        return {
            "theta": self.direction.theta,
            "phi": self.direction.phi,
            "non_opposite_mass": self.non_opposite_mass,
            "opposite_probabilities": list(self.opposite_probabilities),
            "passed": self.passed,
        }


def opposite_outcomes_check(
    d: Direction, state: np.ndarray, tol: Tolerances = DEFAULT
) -> OppositeOutcomesReport:
    """Measure the spin observable along ``d`` on both sides of the singlet.

    All probability mass must sit on outcome pairs with m1 + m2 = 0; the
    three opposite cells each carry 1/3.
    """
    ctx = context_from_matrix(spin_observable(d, tol).matrix, tol)
    dist = joint_distribution(ctx, ctx, state, tol)
    non_opposite = 0.0
    opposite = []
    for i, m1 in enumerate(ctx.labels):
        for j, m2 in enumerate(ctx.labels):
            if abs(m1 + m2) < 0.5:
                opposite.append(dist.cell(i, j))
            else:
                non_opposite += dist.cell(i, j)
    return OppositeOutcomesReport(
        direction=d,
        non_opposite_mass=non_opposite,
        opposite_probabilities=tuple(opposite),
        passed=non_opposite < tol.opposite_mass,
    )


@dataclass(frozen=True, eq=False)
class RotationInvarianceReport:
    """Form invariance of the singlet under two-sided rotations.

    ``overlap_magnitude`` is |<s| (U (x) U) |s>| for the requested rotation;
    ``witness_overlap`` is the same quantity for a fixed diagonal phase
    unitary that is not a rotation, demonstrating that the invariance is not
    shared by all unitaries.
    """

    overlap_magnitude: float
    deviation: float
    passed: bool
    witness_overlap: float
    witness_below_one: bool

    def to_dict(self) -> dict:
        return {
            "overlap_magnitude": self.overlap_magnitude,
            "deviation": self.deviation,
            "passed": self.passed,
            "witness_overlap": self.witness_overlap,
            "witness_below_one": self.witness_below_one,
        }


def non_rotation_witness() -> np.ndarray:
    """A diagonal phase unitary that is not a spatial rotation."""
    return np.diag([1.0, np.exp(1j), 1.0])


def rotation_invariance_check(
    axis: Direction, angle: float, state: np.ndarray, tol: Tolerances = DEFAULT
) -> RotationInvarianceReport:
    """Verify |<s| (U (x) U) |s>| = 1 for the rotation about ``axis``."""
    state = np.asarray(state, dtype=complex)
    u = rotation_operator(axis, angle, tol)
    overlap = abs(complex(state.conj() @ linalg.kron(u, u) @ state))
    witness = non_rotation_witness()
    witness_overlap = abs(complex(state.conj() @ linalg.kron(witness, witness) @ state))
    return RotationInvarianceReport(
        overlap_magnitude=overlap,
        deviation=abs(overlap - 1.0),
        passed=abs(overlap - 1.0) < tol.overlap_unity,
        witness_overlap=witness_overlap,
        witness_below_one=witness_overlap < 1.0 - tol.nonrotation_margin,
    )


def interlinked_distribution(
    labels1: KSLabels,
    labels2: KSLabels,
    swap: bool = False,
    tol: Tolerances = DEFAULT,
) -> JointDistribution:
    """Joint distribution of the two interlinked presets on the singlet.

    Side 1 measures the (0, pi/2) preset with ``labels1`` and side 2 the
    (pi/4, 3pi/4) preset with ``labels2``; ``swap`` exchanges the sides.
    """
    ctx1 = context_of(c_red(labels1, tol), tol)
    ctx2 = context_of(c_prime_blue(labels2, tol), tol)
    if swap:
        ctx1, ctx2 = ctx2, ctx1
    return joint_distribution(ctx1, ctx2, singlet_state(), tol)

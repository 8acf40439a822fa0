"""Self-contained acceptance suite.

Each criterion function checks one release gate at its pinned tolerance and
returns a :class:`CriterionResult`; ``run_all`` runs the whole gate.  The
CLI ``report`` command prints one line per criterion, and the pytest suite
asserts each one individually, so the gate is identical in both entry
points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bundled, linalg
from .experiment import (
    ALLOWED_CROSS_CELLS,
    FORBIDDEN_CELLS,
    SHARED_CELL,
    expectation_closed_form,
    expectation_trace,
    interlinked_distribution,
    non_rotation_witness,
    opposite_outcomes_check,
    sample,
    singlet_state,
)
from .ks import KSLabels, c_prime_blue, c_red, context_of
from .logic import GDLParseError, parse_diagram, serialize_diagram, validate_diagram
from .spin import Direction, rotation_operator
from .tolerances import DEFAULT, Tolerances

SQ2 = math.sqrt(2.0)
SQ3 = math.sqrt(3.0)

REFERENCE_LABELS_1 = KSLabels(1.0, 2.0, 3.0)
REFERENCE_LABELS_2 = KSLabels(4.0, 5.0, 6.0)

RED_REFERENCE_RAYS = (
    np.array([0, 1, 0], dtype=complex),
    np.array([1 / SQ2, 0, 1 / SQ2], dtype=complex),
    np.array([-1 / SQ2, 0, 1 / SQ2], dtype=complex),
)
BLUE_REFERENCE_RAYS = (
    np.array([0, 1, 0], dtype=complex),
    np.array([-1j / SQ2, 0, 1 / SQ2], dtype=complex),
    np.array([1j / SQ2, 0, 1 / SQ2], dtype=complex),
)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.number}. {self.name}: {self.detail}"

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
        }


def _random_labels(rng, min_gap=0.1) -> KSLabels:
    while True:
        vals = rng.uniform(-2.0, 2.0, size=3)
        gaps = (
            abs(vals[0] - vals[1]),
            abs(vals[0] - vals[2]),
            abs(vals[1] - vals[2]),
        )
        if min(gaps) >= min_gap:
            return KSLabels(*vals)


def _random_direction(rng) -> Direction:
    return Direction(math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi))


def _projector_distance(u: np.ndarray, v: np.ndarray) -> float:
    return float(
        np.linalg.norm(np.outer(u, u.conj()) - np.outer(v, v.conj()))
    )


def expectation_identity(seed: int = 42, tol: Tolerances = DEFAULT) -> CriterionResult:
    """Trace form vs closed form over 100 random label pairs, within 1e-10."""
    rng = np.random.default_rng([seed, 1])
    state = singlet_state()
    worst = 0.0
    for _ in range(100):
        l1 = _random_labels(rng)
        l2 = _random_labels(rng)
        trace = expectation_trace(c_red(l1, tol), c_prime_blue(l2, tol), state, tol)
        worst = max(worst, abs(trace - expectation_closed_form(l1, l2)))
    return CriterionResult(
        1,
        "expectation-identity",
        worst < 1e-10,
        f"max |trace - closed form| = {worst:.3e} over 100 label pairs (bound 1e-10)",
    )


def forbidden_coincidences(seed: int = 42, tol: Tolerances = DEFAULT) -> CriterionResult:
    """The four shared-vs-unshared cells of the exact distribution, < 1e-12."""
    d = interlinked_distribution(REFERENCE_LABELS_1, REFERENCE_LABELS_2, tol=tol)
    worst = max(d.cell(i, j) for i, j in FORBIDDEN_CELLS)
    return CriterionResult(
        2,
        "forbidden-coincidences",
        worst < 1e-12,
        f"max forbidden-cell probability = {worst:.3e} (bound 1e-12)",
    )


def allowed_cell_values(seed: int = 42, tol: Tolerances = DEFAULT) -> CriterionResult:
    """Shared cell = 1/3 and cross cells = 1/6, within 1e-12 of the amplitude oracle."""
    d = interlinked_distribution(REFERENCE_LABELS_1, REFERENCE_LABELS_2, tol=tol)
    c1 = context_of(c_red(REFERENCE_LABELS_1, tol), tol)
    c2 = context_of(c_prime_blue(REFERENCE_LABELS_2, tol), tol)
    state = singlet_state()
    worst = abs(d.cell(*SHARED_CELL) - 1 / 3)
    for i, j in ALLOWED_CROSS_CELLS:
        worst = max(worst, abs(d.cell(i, j) - 1 / 6))
    # independent amplitude route must give the same cells
    for i in range(3):
        for j in range(3):
            amp = np.vdot(np.kron(c1.rays[i], c2.rays[j]), state)
            worst = max(worst, abs(abs(amp) ** 2 - d.cell(i, j)))
    return CriterionResult(
        3,
        "allowed-cell-values",
        worst < 1e-12,
        f"max deviation from 1/3 and 1/6 = {worst:.3e} (bound 1e-12)",
    )


def maximal_operator_spectrum(seed: int = 42, tol: Tolerances = DEFAULT) -> CriterionResult:
    """Spectrum = labels (1e-10), eigenrays match the reference (1e-8), one shared ray."""
    rng = np.random.default_rng([seed, 4])
    worst_spectrum = 0.0
    for _ in range(100):
        labels = _random_labels(rng)
        preset = c_red if rng.uniform() < 0.5 else c_prime_blue
        es = linalg.hermitian_eigen(preset(labels, tol).matrix, tol)
        worst_spectrum = max(
            worst_spectrum,
            float(np.max(np.abs(es.eigenvalues - np.sort(labels.as_tuple())))),
        )
    red = context_of(c_red(REFERENCE_LABELS_1, tol), tol)
    blue = context_of(c_prime_blue(REFERENCE_LABELS_2, tol), tol)
    worst_ray = 0.0
    for ray, reference in zip(red.rays, RED_REFERENCE_RAYS):
        worst_ray = max(worst_ray, _projector_distance(ray, reference))
    for ray, reference in zip(blue.rays, BLUE_REFERENCE_RAYS):
        worst_ray = max(worst_ray, _projector_distance(ray, reference))
    shared = [
        (u, v)
        for u in red.rays
        for v in blue.rays
        if _projector_distance(u, v) < 1e-10
    ]
    shared_ok = len(shared) == 1 and (
        _projector_distance(shared[0][0], np.array([0, 1, 0], dtype=complex)) < 1e-10
    )
    passed = worst_spectrum < 1e-10 and worst_ray < 1e-8 and shared_ok
    return CriterionResult(
        4,
        "maximal-operator-spectrum",
        passed,
        f"max |spectrum - labels| = {worst_spectrum:.3e} (bound 1e-10), "
        f"max ray distance = {worst_ray:.3e} (bound 1e-8), "
        f"shared rays = {len(shared)} (want 1)",
    )


def singlet_properties(seed: int = 42, tol: Tolerances = DEFAULT) -> CriterionResult:
    """Reference vector (1e-15), 50 rotation overlaps (1e-9), one non-rotation witness."""
    state = singlet_state()
    reference = np.array([0, 0, 1, 0, -1, 0, 1, 0, 0], dtype=complex) / SQ3
    vector_err = float(np.max(np.abs(state - reference)))
    rng = np.random.default_rng([seed, 5])
    worst_overlap = 0.0
    for _ in range(50):
        u = rotation_operator(_random_direction(rng), rng.uniform(0, 2 * math.pi), tol)
        overlap = abs(complex(state.conj() @ linalg.kron(u, u) @ state))
        worst_overlap = max(worst_overlap, abs(overlap - 1.0))
    witness = non_rotation_witness()
    witness_overlap = abs(complex(state.conj() @ linalg.kron(witness, witness) @ state))
    passed = (
        vector_err < 1e-15
        and worst_overlap < 1e-9
        and witness_overlap < 1.0 - 1e-3
    )
    return CriterionResult(
        5,
        "singlet-properties",
        passed,
        f"vector error = {vector_err:.3e} (bound 1e-15), "
        f"max rotation overlap deviation = {worst_overlap:.3e} (bound 1e-9), "
        f"witness overlap = {witness_overlap:.6f} (bound < {1 - 1e-3})",
    )


def opposite_outcomes(seed: int = 42, tol: Tolerances = DEFAULT) -> CriterionResult:
    """50 random directions: all mass on opposite pairs, each cell 1/3 (1e-10)."""
    rng = np.random.default_rng([seed, 6])
    state = singlet_state()
    worst_mass = 0.0
    worst_cell = 0.0
    for _ in range(50):
        report = opposite_outcomes_check(_random_direction(rng), state, tol)
        worst_mass = max(worst_mass, report.non_opposite_mass)
        worst_cell = max(
            worst_cell,
            max(abs(p - 1 / 3) for p in report.opposite_probabilities),
        )
    passed = worst_mass < 1e-10 and worst_cell < 1e-10
    return CriterionResult(
        6,
        "opposite-outcomes",
        passed,
        f"max non-opposite mass = {worst_mass:.3e}, "
        f"max |opposite cell - 1/3| = {worst_cell:.3e} (bounds 1e-10)",
    )


def sampler_fidelity(seed: int = 42, tol: Tolerances = DEFAULT) -> CriterionResult:
    """Seed-42 million-shot tally: zero forbidden counts, 0.005 frequency bound,
    byte-identical rerun, golden file match."""
    d = interlinked_distribution(REFERENCE_LABELS_1, REFERENCE_LABELS_2, tol=tol)
    tally = sample(d, shots=1_000_000, seed=42)
    rerun = sample(d, shots=1_000_000, seed=42)
    forbidden_counts = sum(int(tally.counts[i, j]) for i, j in FORBIDDEN_CELLS)
    freqs = tally.frequencies()
    worst_freq = abs(freqs[SHARED_CELL] - 1 / 3)
    for i, j in ALLOWED_CROSS_CELLS:
        worst_freq = max(worst_freq, abs(freqs[i, j] - 1 / 6))
    identical = tally.to_json() == rerun.to_json()
    golden = bundled.golden_tally()
    golden_match = (
        golden["algorithm"] == tally.algorithm
        and golden["seed"] == tally.seed
        and golden["shots"] == tally.shots
        and np.array_equal(np.array(golden["counts"]), tally.counts)
    )
    passed = (
        forbidden_counts == 0 and worst_freq < 0.005 and identical and golden_match
    )
    return CriterionResult(
        7,
        "sampler-fidelity",
        passed,
        f"forbidden counts = {forbidden_counts}, "
        f"max |frequency - exact| = {worst_freq:.5f} (bound 0.005), "
        f"rerun identical = {identical}, golden match = {golden_match}",
    )


def eigensolver_quality(seed: int = 42, tol: Tolerances = DEFAULT) -> CriterionResult:
    """Reconstruction (1e-9) and orthonormality (1e-10) on 100 random inputs per size."""
    rng = np.random.default_rng([seed, 8])
    worst_recon = 0.0
    worst_gram = 0.0
    for dim in (3, 9):
        for _ in range(100):
            m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            m = (m + m.conj().T) / 2
            es = linalg.hermitian_eigen(m, tol)
            worst_recon = max(
                worst_recon, float(np.max(np.abs(es.reconstruct() - m)))
            )
            gram = es.eigenvectors.conj().T @ es.eigenvectors
            worst_gram = max(
                worst_gram, float(np.max(np.abs(gram - np.eye(dim))))
            )
    passed = worst_recon < 1e-9 and worst_gram < 1e-10
    return CriterionResult(
        8,
        "eigensolver-quality",
        passed,
        f"max reconstruction error = {worst_recon:.3e} (bound 1e-9), "
        f"max orthonormality defect = {worst_gram:.3e} (bound 1e-10)",
    )


def diagram_parser(seed: int = 42, tol: Tolerances = DEFAULT) -> CriterionResult:
    """Bundled diagram parses and validates; exact round-trip; positioned errors."""
    diagram = parse_diagram(bundled.fig1_text(), tol)
    report = validate_diagram(diagram, tol)
    links = diagram.interlinks()
    structure_ok = (
        len(diagram.rays) == 5
        and len(diagram.contexts) == 2
        and len(links) == 1
        and report.valid
    )
    reparsed = parse_diagram(serialize_diagram(diagram), tol)
    round_trip_ok = (
        list(reparsed.rays) == list(diagram.rays)
        and reparsed.contexts == diagram.contexts
        and all(
            reparsed.rays[name].components == diagram.rays[name].components
            for name in diagram.rays
        )
    )
    malformed = [
        "ray a = (1, 0\n",
        "context z = { a }\n",
        "ray a = (1, 0, bogus)\n",
    ]
    errors_ok = True
    for text in malformed:
        try:
            parse_diagram(text, tol)
        except GDLParseError as err:
            if err.line < 1 or err.column < 1:
                errors_ok = False
        else:
            errors_ok = False
    passed = structure_ok and round_trip_ok and errors_ok
    return CriterionResult(
        9,
        "diagram-parser",
        passed,
        f"rays/contexts/interlinks = {len(diagram.rays)}/{len(diagram.contexts)}/"
        f"{len(links)} (want 5/2/1), valid = {report.valid}, "
        f"round trip exact = {round_trip_ok}, positioned errors = {errors_ok}",
    )


CRITERIA: tuple[Callable[[int, Tolerances], CriterionResult], ...] = (
    expectation_identity,
    forbidden_coincidences,
    allowed_cell_values,
    maximal_operator_spectrum,
    singlet_properties,
    opposite_outcomes,
    sampler_fidelity,
    eigensolver_quality,
    diagram_parser,
)


def run_all(seed: int = 42, tol: Tolerances = DEFAULT) -> list[CriterionResult]:
    """Run every acceptance criterion; deterministic for a given seed."""
    return [criterion(seed, tol) for criterion in CRITERIA]

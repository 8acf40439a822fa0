"""Maximal Kochen-Specker operators and their measurement contexts.

A maximal operator encodes a full three-outcome measurement: it is built
from squared spin observables in the x-y plane along two azimuths a quarter
turn apart (doubled-angle antipodal), plus the squared z observable,

    0.5 * [ (f + s - t) J^2(pi/2, a1)
          + (f - s + t) J^2(pi/2, a2)
          + (s + t - f) J^2(0, 0) ]

for outcome labels (f, s, t).  Its spectrum is exactly the label set and is
nondegenerate, so the eigenrays form one measurement context.  The two
bundled presets share the eigenray (0, 1, 0) (always labeled ``first``),
which is what interlinks their contexts.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .spin import Direction, spin_squared
from .tolerances import DEFAULT, Tolerances

# Azimuth pairs of the two bundled interlinked presets.
C_RED_AZIMUTHS: tuple[float, float] = (0.0, math.pi / 2)
C_PRIME_BLUE_AZIMUTHS: tuple[float, float] = (math.pi / 4, 3 * math.pi / 4)


@dataclass(frozen=True)
class KSLabels:
    """Three pairwise-distinct real outcome labels."""

    first: float
    second: float
    third: float

    def __post_init__(self):
        vals = (float(self.first), float(self.second), float(self.third))
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("labels must be finite")
        gap = min(
            abs(vals[0] - vals[1]), abs(vals[0] - vals[2]), abs(vals[1] - vals[2])
        )
        if gap < DEFAULT.label_min_gap:
            raise ValueError(
                f"labels must be pairwise distinct with gap >= "
                f"{DEFAULT.label_min_gap}; got {vals} (gap {gap:.3e})"
            )
        object.__setattr__(self, "first", vals[0])
        object.__setattr__(self, "second", vals[1])
        object.__setattr__(self, "third", vals[2])

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.first, self.second, self.third)


@dataclass(frozen=True, eq=False)
class KSOperator:
    """A maximal operator with its labels and the azimuth pair it was built from."""

    labels: KSLabels
    azimuth_pair: tuple[float, float]
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class Context:
    """Three mutually orthogonal outcome rays with their outcome labels."""

    rays: tuple[np.ndarray, np.ndarray, np.ndarray]
    labels: tuple[float, float, float]

    def projectors(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(linalg.projector(r) for r in self.rays)


def ks_operator(
    labels: KSLabels,
    azimuth_pair: tuple[float, float] = C_RED_AZIMUTHS,
    tol: Tolerances = DEFAULT,
) -> KSOperator:
    """Build the maximal operator for the given labels and azimuth pair.

    The two azimuths must sit a quarter turn apart modulo pi (equivalently
    e^{-2i a1} = -e^{-2i a2}); that is what makes the spectrum equal the
    label set for every valid label triple.
    """
    a1, a2 = float(azimuth_pair[0]), float(azimuth_pair[1])
    pairing = abs(cmath.exp(-2j * a1) + cmath.exp(-2j * a2))
    if pairing > tol.azimuth_pairing:
        raise ValueError(
            "azimuth pair must differ by pi/2 modulo pi "
            f"(pairing defect {pairing:.3e})"
        )
    f, s, t = labels.as_tuple()
    matrix = 0.5 * (
        (f + s - t) * spin_squared(Direction(math.pi / 2, a1), tol)
        + (f - s + t) * spin_squared(Direction(math.pi / 2, a2), tol)
        + (s + t - f) * spin_squared(Direction(0.0, 0.0), tol)
    )
    matrix.setflags(write=False)
    return KSOperator(labels=labels, azimuth_pair=(a1, a2), matrix=matrix)


def c_red(labels: KSLabels, tol: Tolerances = DEFAULT) -> KSOperator:
    """Preset: azimuths (0, pi/2)."""
    return ks_operator(labels, C_RED_AZIMUTHS, tol)


def c_prime_blue(labels: KSLabels, tol: Tolerances = DEFAULT) -> KSOperator:
    """Preset: azimuths (pi/4, 3*pi/4); shares the ray (0, 1, 0) with c_red."""
    return ks_operator(labels, C_PRIME_BLUE_AZIMUTHS, tol)


def context_of(op: KSOperator, tol: Tolerances = DEFAULT) -> Context:
    """Extract the measurement context: eigenrays paired with outcome labels.

    Rays are ordered (first, second, third) by the label they carry, not by
    eigenvalue size.
    """
    es = linalg.hermitian_eigen(op.matrix, tol)
    gaps = np.diff(es.eigenvalues)
    if np.any(gaps < tol.degenerate_gap):
        raise ValueError(
            f"operator spectrum is degenerate (min gap {float(np.min(gaps)):.3e}); "
            "cannot assign outcome rays"
        )
    rays = []
    used: set[int] = set()
    for label in op.labels.as_tuple():
        k = int(np.argmin(np.abs(es.eigenvalues - label)))
        if k in used:
            raise ValueError("labels do not match the operator spectrum one-to-one")
        residual = abs(float(es.eigenvalues[k]) - label)
        if residual > tol.spectrum_match:
            raise ValueError(
                f"label {label} misses the nearest eigenvalue by {residual:.3e}"
            )
        used.add(k)
        rays.append(es.vector(k))
    return Context(rays=tuple(rays), labels=op.labels.as_tuple())


def context_from_matrix(
    matrix: np.ndarray, tol: Tolerances = DEFAULT
) -> Context:
    """Context of any nondegenerate Hermitian matrix, labeled by eigenvalue."""
    es = linalg.hermitian_eigen(matrix, tol)
    gaps = np.diff(es.eigenvalues)
    if np.any(gaps < tol.degenerate_gap):
        raise ValueError("matrix spectrum is degenerate; no unique context")
    return Context(
        rays=tuple(es.vector(k) for k in range(es.dim)),
        labels=tuple(float(v) for v in es.eigenvalues),
    )


@dataclass(frozen=True, eq=False)
class ContextCommutationReport:
    """Compatibility evidence for the three building blocks of one operator.

    ``commutator_norms`` holds the Frobenius norm of each pairwise
    commutator of the squared-spin blocks; ``diagonality_residuals`` holds,
    per block, the largest off-diagonal magnitude of the block expressed in
    the operator's eigenbasis (zero means the block is a function of the
    operator); ``coefficients`` are the per-block eigenprojector weights.
    """

    commutator_norms: tuple[float, float, float]
    diagonality_residuals: tuple[float, float, float]
    coefficients: np.ndarray
    commuting: bool


def commuting_within_context(
    op: KSOperator, tol: Tolerances = DEFAULT
) -> ContextCommutationReport:
    """Check that the operator's three squared-spin blocks are commeasurable."""
    a1, a2 = op.azimuth_pair
    blocks = [
        spin_squared(Direction(math.pi / 2, a1), tol),
        spin_squared(Direction(math.pi / 2, a2), tol),
        spin_squared(Direction(0.0, 0.0), tol),
    ]
    norms = []
    for i in range(3):
        for j in range(i + 1, 3):
            comm = blocks[i] @ blocks[j] - blocks[j] @ blocks[i]
            norms.append(float(np.linalg.norm(comm)))
    es = linalg.hermitian_eigen(op.matrix, tol)
    v = es.eigenvectors
    residuals = []
    coeffs = np.zeros((3, 3))
    for k, block in enumerate(blocks):
        in_basis = v.conj().T @ block @ v
        off = in_basis - np.diag(np.diag(in_basis))
        residuals.append(float(np.max(np.abs(off))))
        coeffs[k] = np.diag(in_basis).real
    commuting = max(norms) < tol.commutation and max(residuals) < tol.commutation
    coeffs.setflags(write=False)
    return ContextCommutationReport(
        commutator_norms=tuple(norms),
        diagonality_residuals=tuple(residuals),
        coefficients=coeffs,
        commuting=commuting,
    )

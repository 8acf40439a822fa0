"""Central tolerance configuration.

Every numerical comparison in the library and in the acceptance suite reads
its threshold from a single :class:`Tolerances` record, so one override
reaches all call sites and every check can cite the tolerance it ran at.
"""

from __future__ import annotations

import dataclasses


@dataclasses.dataclass(frozen=True)
class Tolerances:
    # state vectors and projectors
    state_norm: float = 1e-12           # unit-norm residual of constructed states
    projector_input_norm: float = 1e-9  # reject projector input farther from unit norm
    # matrix structure
    hermiticity: float = 1e-10
    unitarity: float = 1e-10
    # eigensolver
    jacobi_offdiag: float = 1e-13       # off-diagonal Frobenius norm stopping point
    jacobi_max_sweeps: int = 100
    degenerate_gap: float = 1e-9        # eigenvalues closer than this share an eigenspace
    phase_anchor: float = 1e-8          # first component above this is made real positive
    eigen_residual: float = 1e-10       # |A v - lambda v| per pair
    orthonormality: float = 1e-10
    eigen_reconstruction: float = 1e-9  # sum of lambda |v><v| versus the input
    # maximal context operators
    label_min_gap: float = 1e-6
    azimuth_pairing: float = 1e-9       # |e^{-2i a1} + e^{-2i a2}| must vanish
    spectrum_match: float = 1e-10
    commutation: float = 1e-10
    ray_dedup: float = 1e-8             # projector Frobenius distance for "same ray"
    # orthogonality diagrams
    context_orthogonality: float = 1e-9
    ray_norm_residual: float = 1e-9
    # distributions and reports
    probability_sum: float = 1e-10
    imaginary_residual: float = 1e-12
    negative_probability: float = 1e-14  # clip floor; anything worse is an error
    forbidden_cell: float = 1e-10
    opposite_mass: float = 1e-10
    overlap_unity: float = 1e-9
    nonrotation_margin: float = 1e-3

    def replace(self, **overrides) -> "Tolerances":
        """Return a copy with the given fields overridden."""
        return dataclasses.replace(self, **overrides)


DEFAULT = Tolerances()

_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(Tolerances)}


def parse_override(text: str) -> tuple[str, float | int]:
    """Parse a ``key=value`` tolerance override, validating the key."""
    key, sep, value = text.partition("=")
    key = key.strip()
    if not sep or key not in _FIELD_TYPES:
        known = ", ".join(sorted(_FIELD_TYPES))
        raise ValueError(f"unknown tolerance override {text!r}; known keys: {known}")
    if key == "jacobi_max_sweeps":
        return key, int(value)
    return key, float(value)

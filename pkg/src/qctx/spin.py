"""Spin-1 observables along arbitrary spatial directions.

The observable for a direction with polar angle theta (from +z) and
azimuthal angle phi (from +x) is the 3x3 Hermitian matrix with diagonal
(cos theta, 0, -cos theta) and first off-diagonals e^{-i phi} sin(theta)/sqrt(2)
above / e^{+i phi} sin(theta)/sqrt(2) below, in the basis ordering
(+, 0, -) <-> indices (0, 1, 2).  Its spectrum is exactly {-1, 0, +1}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .tolerances import DEFAULT, Tolerances

_SQRT2 = math.sqrt(2.0)
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Direction:
    """A spatial direction in spherical coordinates.

    ``theta`` is the polar angle in [0, pi] measured from the z-axis;
    ``phi`` is the azimuthal angle measured from the x-axis, normalized
    into [0, 2*pi) at construction.
    """

    theta: float
    phi: float

    def __post_init__(self):
        theta = float(self.theta)
        phi = float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise ValueError("direction angles must be finite")
        if not 0.0 <= theta <= math.pi:
            raise ValueError(f"polar angle must lie in [0, pi], got {theta}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi % _TWO_PI)

    @classmethod
    def from_cartesian(cls, x: float, y: float, z: float) -> "Direction":
        r = math.sqrt(x * x + y * y + z * z)
        if r == 0.0 or not math.isfinite(r):
            raise ValueError("cannot take the direction of a zero or non-finite vector")
        theta = math.acos(max(-1.0, min(1.0, z / r)))
        phi = math.atan2(y, x)
        return cls(theta, phi)

    def unit_vector(self) -> tuple[float, float, float]:
        st = math.sin(self.theta)
        return (st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta))


@dataclass(frozen=True, eq=False)
class SpinObservable:
    """A spin-1 observable together with the direction it points along."""

    direction: Direction
    matrix: np.ndarray


def spin_observable(d: Direction, tol: Tolerances = DEFAULT) -> SpinObservable:
    """Spin-1 observable along ``d``; Hermitian, traceless, spectrum {-1, 0, 1}."""
    c = math.cos(d.theta)
    s = math.sin(d.theta) / _SQRT2
    em = cmath.exp(-1j * d.phi)
    ep = em.conjugate()
    matrix = np.array(
        [
            [c, em * s, 0.0],
            [ep * s, 0.0, em * s],
            [0.0, ep * s, -c],
        ],
        dtype=complex,
    )
    matrix.setflags(write=False)
    return SpinObservable(direction=d, matrix=matrix)


def spin_squared(d: Direction, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Square of the spin observable along ``d`` (explicit matrix product)."""
    m = spin_observable(d, tol).matrix
    return m @ m


def rotation_operator(
    axis: Direction, angle: float, tol: Tolerances = DEFAULT
) -> np.ndarray:
    """Rotation exp(-i * angle * J(axis)) generated by the spin observable."""
    return linalg.unitary_from_generator(spin_observable(axis, tol).matrix, angle, tol)

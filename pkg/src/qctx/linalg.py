"""Dense complex linear algebra for small Hilbert spaces (dimensions 3 and 9).

Matrices and state vectors are plain ``numpy`` arrays of ``complex128``;
every operation is a pure function and never mutates its arguments.  The
eigensolver is a cyclic complex Jacobi iteration (compiled kernel with a
pure-Python fallback) with a fixed phase convention, so identical inputs
produce identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import jacobi_eigh
from .tolerances import DEFAULT, Tolerances


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with (a ⊗ b)[i*rb + k, j*cb + l] = a[i, j] b[k, l]."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose, returned as a fresh array."""
    return np.asarray(a, dtype=complex).conj().T.copy()


def hermiticity_defect(a: np.ndarray) -> float:
    """Largest entrywise deviation of ``a`` from its conjugate transpose."""
    a = np.asarray(a, dtype=complex)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def norm(v: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(v, dtype=complex)))


def projector(v: np.ndarray, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Rank-1 projector |v><v| of a normalized vector.

    Rejects input whose norm deviates from 1 by more than
    ``tol.projector_input_norm``.
    """
    v = np.asarray(v, dtype=complex)
    if not np.isfinite(v).all():
        raise ValueError("projector input must have finite components")
    deviation = abs(np.linalg.norm(v) - 1.0)
    if deviation > tol.projector_input_norm:
        raise ValueError(
            f"projector input must be normalized; norm deviates by {deviation:.3e}"
        )
    return np.outer(v, v.conj())


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Spectral decomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending (inside a degenerate cluster the
    order is the deterministic tie-break, so monotonicity holds up to the
    cluster gap).  Column k of ``eigenvectors`` pairs with ``eigenvalues[k]``;
    each column's first significant component is real and positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])

    def vector(self, k: int) -> np.ndarray:
        return self.eigenvectors[:, k].copy()

    def reconstruct(self) -> np.ndarray:
        """Reassemble the source matrix as sum of eigenvalue * |v><v|."""
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def _phase_fix(v: np.ndarray, anchor: float) -> np.ndarray:
    mags = np.abs(v)
    above = np.nonzero(mags > anchor)[0]
    k = int(above[0]) if above.size else int(np.argmax(mags))
    pivot = v[k]
    return v * (pivot.conjugate() / abs(pivot))


def _lex_key(v: np.ndarray) -> tuple:
    return tuple((float(z.real), float(z.imag)) for z in v)


def _degenerate_slices(values: np.ndarray, gap: float) -> list[tuple[int, int]]:
    slices = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] >= gap:
            slices.append((start, i))
            start = i
    return slices


def hermitian_eigen(a: np.ndarray, tol: Tolerances = DEFAULT) -> EigenSystem:
    """Full spectral decomposition of a Hermitian matrix.

    Cyclic Jacobi rotations run until the off-diagonal Frobenius norm falls
    below ``tol.jacobi_offdiag`` (at most ``tol.jacobi_max_sweeps`` sweeps).
    Eigenvalues are sorted ascending; eigenvectors inside a degenerate
    cluster (gap below ``tol.degenerate_gap``) are re-orthonormalized by
    sequential projection and ordered by their phase-fixed components.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    defect = hermiticity_defect(a)
    if defect > tol.hermiticity:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")

    work = (a + a.conj().T) * 0.5
    diag, vecs, sweeps = jacobi_eigh(work, tol.jacobi_offdiag, tol.jacobi_max_sweeps)

    order = np.argsort(diag, kind="stable")
    values = diag[order]
    vectors = vecs[:, order].copy()

    clusters = _degenerate_slices(values, tol.degenerate_gap)
    for lo, hi in clusters:
        if hi - lo > 1:
            for k in range(lo, hi):
                col = vectors[:, k]
                for m in range(lo, k):
                    col = col - (vectors[:, m].conj() @ col) * vectors[:, m]
                vectors[:, k] = col / np.linalg.norm(col)
    for k in range(values.shape[0]):
        vectors[:, k] = _phase_fix(vectors[:, k], tol.phase_anchor)
    for lo, hi in clusters:
        if hi - lo > 1:
            perm = sorted(range(lo, hi), key=lambda k: _lex_key(vectors[:, k]))
            values[lo:hi] = values[perm]
            vectors[:, lo:hi] = vectors[:, perm]

    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenSystem(eigenvalues=values, eigenvectors=vectors, sweeps=sweeps)


def unitary_from_generator(
    h: np.ndarray, angle: float, tol: Tolerances = DEFAULT
) -> np.ndarray:
    """exp(-i * angle * h) for Hermitian ``h``, via eigendecomposition."""
    es = hermitian_eigen(h, tol)
    phases = np.exp(-1j * angle * es.eigenvalues)
    return (es.eigenvectors * phases) @ es.eigenvectors.conj().T


def unitarity_defect(u: np.ndarray) -> float:
    """Largest entrywise deviation of u†u from the identity."""
    u = np.asarray(u, dtype=complex)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))

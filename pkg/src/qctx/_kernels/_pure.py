"""Pure-Python kernels.

These mirror the compiled extension operation for operation (same arithmetic,
same order), so either backend can serve the same contracts.  The compiled
module is preferred at import time when available; this one is the fallback
and the ground truth the extension is benchmarked against.
"""

from __future__ import annotations

import math

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TWO53_INV = 1.0 / 9007199254740992.0  # 2**-53


def splitmix64_next(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (advanced state, 64-bit output)."""
    state = (state + _GOLDEN) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return state, z ^ (z >> 31)


def sample_counts(cdf: np.ndarray, shots: int, seed: int) -> np.ndarray:
    """Draw ``shots`` categorical samples against a cumulative distribution.

    The variate is the top 53 bits of splitmix64 output mapped to [0, 1);
    cell k is selected as the smallest k with u < cdf[k] (the last cell
    absorbs any leftover rounding mass).  Same (cdf, shots, seed) gives the
    same counts on every platform.
    """
    thresholds = [float(x) for x in cdf]
    m = len(thresholds)
    counts = np.zeros(m, dtype=np.int64)
    state = seed & _MASK64
    for _ in range(shots):
        state, z = splitmix64_next(state)
        u = (z >> 11) * _TWO53_INV
        k = 0
        while k < m - 1 and u >= thresholds[k]:
            k += 1
        counts[k] += 1
    return counts


def jacobi_eigh(a: np.ndarray, tol_offdiag: float, max_sweeps: int):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Sweeps rotate out every off-diagonal pair until the off-diagonal
    Frobenius norm drops below ``tol_offdiag`` or ``max_sweeps`` sweeps have
    run.  Returns ``(diag, vectors, sweeps)`` with the raw real diagonal and
    the accumulated unitary (column k pairs with diag[k]); no sorting or
    phase convention is applied here.
    """
    w = np.array(a, dtype=np.complex128, order="C", copy=True)
    n = w.shape[0]
    v = np.eye(n, dtype=np.complex128)
    sweeps = 0
    while sweeps < max_sweeps:
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    x = w[i, j]
                    off += x.real * x.real + x.imag * x.imag
        if math.sqrt(off) < tol_offdiag:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                mag = math.hypot(apq.real, apq.imag)
                if mag == 0.0:
                    continue
                # phase of the pivot and the rotation that annihilates it
                e = complex(apq.real / mag, apq.imag / mag)
                tau = (w[p, p].real - w[q, q].real) / (2.0 * mag)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(tau * tau + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                se = s * e
                sec = s * e.conjugate()
                for i in range(n):
                    aip = w[i, p]
                    aiq = w[i, q]
                    w[i, p] = c * aip + sec * aiq
                    w[i, q] = c * aiq - se * aip
                for j in range(n):
                    apj = w[p, j]
                    aqj = w[q, j]
                    w[p, j] = c * apj + se * aqj
                    w[q, j] = c * aqj - sec * apj
                w[p, q] = 0.0
                w[q, p] = 0.0
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip + sec * viq
                    v[i, q] = c * viq - se * vip
        sweeps += 1
    diag = np.array([w[i, i].real for i in range(n)], dtype=np.float64)
    return diag, v, sweeps

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: categorical sampler and complex Jacobi eigensolver.

Kept in lockstep with ``_pure.py``: identical arithmetic in identical order,
so the two backends are interchangeable.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport copysign, fabs, hypot, sqrt

cnp.import_array()


def sample_counts(cdf, long long shots, seed):
    """Draw ``shots`` categorical samples against a cumulative distribution."""
    cdef double[::1] thresholds = np.ascontiguousarray(cdf, dtype=np.float64)
    cdef Py_ssize_t m = thresholds.shape[0]
    counts = np.zeros(m, dtype=np.int64)
    cdef long long[::1] cv = counts
    cdef unsigned long long state = <unsigned long long> (int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef unsigned long long z
    cdef double u
    cdef Py_ssize_t k
    cdef long long i
    for i in range(shots):
        state += 0x9E3779B97F4A7C15ULL
        z = state
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
        z = z ^ (z >> 31)
        u = (z >> 11) * (1.0 / 9007199254740992.0)
        k = 0
        while k < m - 1 and u >= thresholds[k]:
            k += 1
        cv[k] += 1
    return counts


def jacobi_eigh(a, double tol_offdiag, int max_sweeps):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix."""
    w_arr = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] w = w_arr
    cdef Py_ssize_t n = w.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] v = v_arr
    cdef int sweeps = 0
    cdef Py_ssize_t i, j, p, q
    cdef double off, mag, tau, t, c, s, er, ei
    cdef double complex apq, se, sec, aip, aiq, apj, aqj, vip, viq, x

    while sweeps < max_sweeps:
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    x = w[i, j]
                    off += x.real * x.real + x.imag * x.imag
        if sqrt(off) < tol_offdiag:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                mag = hypot(apq.real, apq.imag)
                if mag == 0.0:
                    continue
                er = apq.real / mag
                ei = apq.imag / mag
                tau = (w[p, p].real - w[q, q].real) / (2.0 * mag)
                t = copysign(1.0, tau) / (fabs(tau) + sqrt(tau * tau + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                se = (s * er) + 1j * (s * ei)
                sec = (s * er) - 1j * (s * ei)
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
    diag = np.empty(n, dtype=np.float64)
    cdef double[::1] dv = diag
    for i in range(n):
        dv[i] = w[i, i].real
    return diag, v_arr, sweeps

#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the two hot paths (complex Jacobi eigensolver, coincidence sampler)
on both backends and prints a speedup table.

    python benchmarks/bench_backends.py [--shots N] [--matrices N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qctx._kernels import _pure

try:
    from qctx._kernels import _core
except ImportError:
    _core = None


def bench(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def random_hermitian_batch(rng, n, count):
    batch = []
    for _ in range(count):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        batch.append((m + m.conj().T) / 2)
    return batch


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--shots", type=int, default=1_000_000)
    parser.add_argument("--matrices", type=int, default=200)
    args = parser.parse_args()

    if _core is None:
        print("compiled extension not available; nothing to compare")
        return

    rng = np.random.default_rng(2024)
    rows = []

    for dim in (3, 9):
        batch = random_hermitian_batch(rng, dim, args.matrices)

        def run(backend, batch=batch):
            for m in batch:
                backend.jacobi_eigh(m, 1e-13, 100)

        t_pure = bench(lambda: run(_pure))
        t_core = bench(lambda: run(_core))
        rows.append((f"jacobi_eigh {dim}x{dim} x{args.matrices}", t_pure, t_core))

    probs = np.array([1 / 3, 0, 0, 0, 1 / 6, 1 / 6, 0, 1 / 6, 1 / 6])
    cdf = np.cumsum(probs)
    t_pure = bench(lambda: _pure.sample_counts(cdf, args.shots, 42))
    t_core = bench(lambda: _core.sample_counts(cdf, args.shots, 42))
    rows.append((f"sample_counts {args.shots} shots", t_pure, t_core))

    width = max(len(name) for name, _, _ in rows)
    print(f"{'kernel':<{width}}  {'pure (s)':>10}  {'compiled (s)':>12}  {'speedup':>8}")
    for name, tp, tc in rows:
        print(f"{name:<{width}}  {tp:>10.4f}  {tc:>12.4f}  {tp / tc:>7.1f}x")

    # correctness spot check while we are here
    a = random_hermitian_batch(rng, 9, 1)[0]
    dp, vp, sp = _pure.jacobi_eigh(a, 1e-13, 100)
    dc, vc, sc = _core.jacobi_eigh(a, 1e-13, 100)
    assert sp == sc and np.allclose(dp, dc, atol=1e-12)
    cp = _pure.sample_counts(cdf, 10_000, 7)
    cc = _core.sample_counts(cdf, 10_000, 7)
    assert np.array_equal(cp, cc)
    print("backend agreement verified")


if __name__ == "__main__":
    main()

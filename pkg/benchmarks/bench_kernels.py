"""Benchmark the compiled kernels against the numpy reference backend.

Run:  python benchmarks/bench_kernels.py
"""
import time

import numpy as np

import sympeig._kernels._reference as reference

try:
    import sympeig._kernels._core as core
except ImportError:
    core = None


def _time(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_quad_phase(backend, n, q, rng):
    pts = rng.standard_normal((n, q))
    quad = rng.standard_normal((q, q))
    quad = quad + quad.T
    lin = rng.standard_normal(q)
    return _time(backend.quad_phase_samples, pts, quad, lin, 0.1, 1.0 + 0.0j)


def bench_stencil(backend, rows, n, rng):
    arr = rng.standard_normal((rows, n)) + 1j * rng.standard_normal((rows, n))
    return _time(backend.stencil_lastaxis, arr, 0.01, 4)


def bench_pairwise(backend, n, rng):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return _time(backend.pairwise_sum, v)


def main():
    rng = np.random.default_rng(0)
    rows = []

    cases = [
        ("quad_phase n=262144 q=1", bench_quad_phase, (262144, 1)),
        ("quad_phase n=262144 q=2", bench_quad_phase, (262144, 2)),
        ("quad_phase n=262144 q=3", bench_quad_phase, (262144, 3)),
        ("stencil    512x512 o4", bench_stencil, (512, 512)),
        ("stencil    2048x512 o4", bench_stencil, (2048, 512)),
        ("pairwise   n=1048576", bench_pairwise, (1048576,)),
    ]
    for label, fn, args in cases:
        t_ref = fn(reference, *args, rng)
        t_core = fn(core, *args, rng) if core is not None else float("nan")
        speedup = t_ref / t_core if core is not None else float("nan")
        rows.append((label, t_ref, t_core, speedup))

    print(f"{'kernel':<26} {'reference':>12} {'compiled':>12} {'speedup':>9}")
    for label, t_ref, t_core, speedup in rows:
        print(f"{label:<26} {t_ref * 1e3:>10.2f}ms {t_core * 1e3:>10.2f}ms {speedup:>8.2f}x")
    if core is None:
        print("\ncompiled backend not built; only the reference timings above")


if __name__ == "__main__":
    main()

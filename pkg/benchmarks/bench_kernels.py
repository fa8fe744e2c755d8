#!/usr/bin/env python3
"""Benchmark the compiled field kernel against the pure-NumPy fallback.

Workloads mirror real call sites: the lumped 225-dome panel evaluated over
a beam-pattern arc, the 64-ring subdivided oracle (14 400 sources), and
the repeated single-point evaluations of a calibration bisection.

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from domewave._kernels._reference import pressure_sum as reference_sum

try:
    from domewave._kernels._field_kernel import pressure_sum as compiled_sum
except ImportError:
    compiled_sum = None


def make_case(rng, n_src, n_pts):
    sources = np.ascontiguousarray(rng.uniform(-0.015, 0.015, (n_src, 3)))
    sources[:, 2] = 0.0
    w_re = np.ascontiguousarray(rng.uniform(-1e-9, 1e-9, n_src))
    w_im = np.ascontiguousarray(rng.uniform(-1e-9, 1e-9, n_src))
    points = np.ascontiguousarray(rng.uniform(-0.5, 0.5, (n_pts, 3)))
    points[:, 2] = np.abs(points[:, 2]) + 0.2
    return sources, w_re, w_im, points


def timeit(fn, *args, repeats=7):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    k = 2 * np.pi * 20e3 / 1480.0
    cases = [
        ("beam pattern: 225 sources x 721 points", 225, 721),
        ("subdivided oracle: 14400 sources x 1 point", 14_400, 1),
        ("calibration step: 225 sources x 1 point", 225, 1),
        ("frequency response: 225 sources x 200 points", 225, 200),
    ]
    print(f"{'workload':<48}{'numpy':>12}{'compiled':>12}{'speedup':>9}")
    for label, n_src, n_pts in cases:
        src, wr, wi, pts = make_case(rng, n_src, n_pts)
        t_ref = timeit(reference_sum, src, wr, wi, pts, k)
        if compiled_sum is None:
            print(f"{label:<48}{t_ref * 1e3:>10.3f} ms{'-':>12}{'-':>9}")
            continue
        t_fast = timeit(compiled_sum, src, wr, wi, pts, k)
        ref = reference_sum(src, wr, wi, pts, k)
        fast = compiled_sum(src, wr, wi, pts, k)
        worst = float(np.max(np.abs(fast - ref) / np.abs(ref)))
        print(f"{label:<48}{t_ref * 1e3:>10.3f} ms{t_fast * 1e3:>10.3f} ms"
              f"{t_ref / t_fast:>8.1f}x   (max rel diff {worst:.1e})")
    if compiled_sum is None:
        print("\ncompiled kernel not built; showing the NumPy fallback only")


if __name__ == "__main__":
    main()

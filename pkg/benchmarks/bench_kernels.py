"""Timing comparison of the compiled kernel lane against the numpy fallback.

Run from the repository root:

    python benchmarks/bench_kernels.py

Both lanes are imported directly (no subprocess games), so the numbers
reflect only the kernel implementations, not import-time selection.
"""

import time

import numpy as np

from chaosboot import _kernels_py, doubling_map, generate_trajectory
from chaosboot.spline import SplineKind, build_map_estimate, kernel_arrays

try:
    from chaosboot import _kernels
except ImportError:
    _kernels = None


def _timeit(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    spec = doubling_map()
    rng = np.random.default_rng(0)
    traj = generate_trajectory(spec, 0.3, 100, rng)
    est = build_map_estimate(traj, spec.discontinuities, SplineKind.NATURAL_CUBIC)
    arrays = kernel_arrays(est)

    x_eval = rng.uniform(0.0, 1.0, 200_000)
    x0 = rng.uniform(0.0, 1.0, 2_000)
    n = 100

    cases = [
        ("eval_spline (200k points)", lambda k: k.eval_spline(x_eval, *arrays)),
        ("pivot_sums (B=2000, n=100, h=x)", lambda k: k.pivot_sums(x0, n, 1, *arrays)),
        ("pivot_sums (B=2000, n=100, h=x^4)", lambda k: k.pivot_sums(x0, n, 4, *arrays)),
    ]

    print(f"{'kernel':<36} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for label, call in cases:
        t_py = _timeit(lambda: call(_kernels_py))
        if _kernels is None:
            print(f"{label:<36} {t_py * 1e3:9.2f}ms {'n/a':>10} {'n/a':>8}")
            continue
        t_c = _timeit(lambda: call(_kernels))
        print(
            f"{label:<36} {t_py * 1e3:9.2f}ms {t_c * 1e3:9.2f}ms "
            f"{t_py / t_c:7.1f}x"
        )


if __name__ == "__main__":
    main()

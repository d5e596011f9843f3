"""Benchmark the compiled pair-counting kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 500,1000,2000,4000] [--repeats 5]

The counting loops are the hot path of the whole analysis: a problem
with m constraints and N samples runs m*(m-1)/2 of these O(N^2) passes.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from conrel import _kernels_py

try:
    from conrel import _kernels
except ImportError:
    _kernels = None


def best_of(repeats, fn, *args):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - started)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="500,1000,2000,4000")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _kernels is None:
        print("compiled kernel not built; showing the numpy fallback only")

    rng = np.random.default_rng(0)
    header = f"{'kernel':<18} {'N':>6} {'python':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name in ("dominance_counts", "crossing_count"):
        py_fn = getattr(_kernels_py, name)
        cy_fn = getattr(_kernels, name) if _kernels is not None else None
        for n in sizes:
            vi = rng.uniform(-5, 5, size=n)
            vj = rng.uniform(-5, 5, size=n)
            if cy_fn is not None:
                assert py_fn(vi, vj, 1e-12) == cy_fn(vi, vj, 1e-12), "backends disagree"
            py_time = best_of(args.repeats, py_fn, vi, vj, 1e-12)
            if cy_fn is None:
                print(f"{name:<18} {n:>6} {py_time * 1e3:>10.2f}ms {'-':>12} {'-':>9}")
            else:
                cy_time = best_of(args.repeats, cy_fn, vi, vj, 1e-12)
                print(
                    f"{name:<18} {n:>6} {py_time * 1e3:>10.2f}ms "
                    f"{cy_time * 1e3:>10.2f}ms {py_time / cy_time:>8.1f}x"
                )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

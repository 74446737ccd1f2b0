"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the hot paths that dominate figure-scale runs: perturbation
sampling, the fused simplex estimator, the trace-ball estimator with its
Gram eigensolver, and standalone power iteration.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from parafw import _kernels_py as pure

try:
    from parafw import _kernels as comp
except ImportError:
    comp = None


def timeit(fn, repeat: int) -> float:
    fn()  # warmup
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


CASES = [
    (
        "gumbel_stream d=1600",
        lambda mod: mod.gumbel_stream(7, 1600),
        2000,
    ),
    (
        "normal_stream d=1600",
        lambda mod: mod.normal_stream(7, 1600),
        2000,
    ),
    (
        "simplex grad m=1 d=50",
        lambda mod, v=np.random.default_rng(0).standard_normal(50): mod.simplex_grad_counts(
            v, 1e-3, 7, 3, 1, 0
        ),
        5000,
    ),
    (
        "simplex grad m=32 d=50",
        lambda mod, v=np.random.default_rng(0).standard_normal(50): mod.simplex_grad_counts(
            v, 1e-3, 7, 3, 32, 0
        ),
        2000,
    ),
    (
        "simplex values n=4096 d=50",
        lambda mod, v=np.random.default_rng(1).standard_normal(50): mod.simplex_support_values(
            v, 1.0, 7, 0, 4096, 0
        ),
        50,
    ),
    (
        "trace grad m=16 10x8",
        lambda mod, v=np.random.default_rng(2).standard_normal((10, 8)): mod.trace_grad_sum(
            v, 1e-3, 7, 3, 16, 1
        ),
        500,
    ),
    (
        "trace values n=1024 10x8",
        lambda mod, v=np.random.default_rng(3).standard_normal((10, 8)): mod.trace_support_values(
            v, 1.0, 7, 0, 1024, 1
        ),
        20,
    ),
    (
        "power_top 10x8",
        lambda mod, v=np.random.default_rng(4).standard_normal((10, 8)): mod.power_top(
            v, 1e-9, 500, 99
        ),
        2000,
    ),
]


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=1)
    args = parser.parse_args()
    if comp is None:
        print("compiled backend unavailable; only timing the fallback")
    print(f"{'kernel':32s} {'pure':>12s} {'compiled':>12s} {'speedup':>9s}")
    for name, fn, repeat in CASES:
        reps = max(1, repeat * args.repeat)
        t_pure = timeit(lambda: fn(pure), reps)
        if comp is not None:
            t_comp = timeit(lambda: fn(comp), reps)
            print(
                f"{name:32s} {t_pure * 1e6:10.1f}us {t_comp * 1e6:10.1f}us "
                f"{t_pure / t_comp:8.1f}x"
            )
        else:
            print(f"{name:32s} {t_pure * 1e6:10.1f}us {'-':>12s} {'-':>9s}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

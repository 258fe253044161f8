"""Benchmark the compiled kernels against their pure-numpy fallbacks.

Times the three hot paths (batch quantile solve, compensated sum, record
scan) on identical inputs and prints a small table with the speedup.

Usage:
    python benchmarks/bench_kernels.py [--size 200000] [--repeats 5]
"""

import argparse
import time

import numpy as np

from plevt import _kernels


def _time(fn, *args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=200_000, help="input array length")
    ap.add_argument("--repeats", type=int, default=5, help="timing repeats (best-of)")
    args = ap.parse_args()

    rng = np.random.default_rng(12345)
    log_inv_u = rng.uniform(0.5, 40.0, args.size)
    beta = 2.0
    summands = rng.standard_normal(args.size) * np.exp(rng.uniform(0, 20, args.size))
    stream = rng.standard_exponential(args.size).cumsum() * rng.uniform(
        0.5, 1.5, args.size
    )

    if not _kernels.have_numba:
        print("numba is not importable; nothing to compare")
        return

    cases = [
        (
            "solve_scaled_quantile",
            _kernels.solve_scaled_quantile_nb,
            _kernels.solve_scaled_quantile_np,
            (log_inv_u, beta),
        ),
        (
            "compensated_sum",
            _kernels.compensated_sum_nb,
            _kernels.compensated_sum_np,
            (summands,),
        ),
        (
            "record_scan",
            _kernels.record_scan_nb,
            _kernels.record_scan_np,
            (stream,),
        ),
    ]

    print(f"size={args.size}  repeats={args.repeats}  (best-of timing, seconds)")
    print(f"{'kernel':<24}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for name, fn_nb, fn_np, call_args in cases:
        fn_nb(*call_args)  # warm the JIT cache before timing
        t_nb = _time(fn_nb, *call_args, repeats=args.repeats)
        t_np = _time(fn_np, *call_args, repeats=args.repeats)
        print(f"{name:<24}{t_nb:>12.6f}{t_np:>12.6f}{t_np / t_nb:>9.2f}x")


if __name__ == "__main__":
    main()

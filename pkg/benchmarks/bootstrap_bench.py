#!/usr/bin/env python3
"""Benchmark the bootstrap resampling kernel: numba @njit vs pure numpy.

Both paths produce bit-identical counts; this script measures the speed
difference on evaluation-sized workloads (reports x 10,000 replicates, as
used for one class/task CI) and verifies equality while at it.

Run:  python3 benchmarks/bootstrap_bench.py
The numpy fallback alone can be exercised end to end with
GERCHEX_NO_NUMBA=1 on any gerchex command.
"""
from __future__ import annotations

import time

import numpy as np

from gerchex import _resample


def bench(fn, categories, seed, resamples, repeats=3) -> float:
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        chunk = 256
        parts = [
            fn(categories, seed, start, min(chunk, resamples - start))
            for start in range(0, resamples, chunk)
        ]
        np.concatenate(parts, axis=0)
        best = min(best, time.perf_counter() - started)
    return best


def main() -> None:
    if not _resample._HAVE_NUMBA:
        raise SystemExit(
            "numba backend not active (GERCHEX_NO_NUMBA set or numba missing); "
            "nothing to compare"
        )
    rng = np.random.default_rng(0)
    resamples = 10_000
    print(f"{'n_reports':>10} {'numpy':>12} {'numba':>12} {'speedup':>9}  identical")
    for n in (100, 300, 900, 3000):
        categories = rng.integers(0, 4, n).astype(np.uint8)
        seed = np.uint64(42)
        # warm the JIT before timing
        _resample._counts_numba(categories, seed, 0, 8)
        t_numpy = bench(_resample._counts_numpy, categories, seed, resamples)
        t_numba = bench(_resample._counts_numba, categories, seed, resamples)
        same = np.array_equal(
            _resample._counts_numpy(categories, seed, 0, 512),
            _resample._counts_numba(categories, seed, 0, 512),
        )
        print(
            f"{n:>10} {t_numpy:>10.3f}s {t_numba:>10.3f}s "
            f"{t_numpy / t_numba:>8.2f}x  {same}"
        )


if __name__ == "__main__":
    main()

"""Bootstrap resampling kernels: confusion counts per replicate.

This is the only hot numeric loop in the package (10,000 replicates times the
corpus size, per class and task), so it carries a numba ``@njit`` kernel with
a pure-numpy fallback. The fallback is selected automatically when numba is
unavailable, or explicitly by setting the environment variable
``GERCHEX_NO_NUMBA=1``. Both paths produce bit-identical counts; a benchmark
comparing them lives in ``benchmarks/bootstrap_bench.py``.

Resampled indices come from a stateless counter-based generator so replicate
streams depend only on (seed, replicate index, draw index) and chunking or
thread count cannot change results. The mapping, which independent checkers
must reproduce, is:

    fmix64(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
               z ^= z >> 27; z *= 0x94D049BB133111EB
               z ^= z >> 31                     (all modulo 2**64)
    base(seed, r) = fmix64(seed + GAMMA * (r + 1))
    index(seed, r, i) = fmix64(base ^ (GAMMA * (i + 1))) mod n
    GAMMA = 0x9E3779B97F4A7C15

Each report pair is encoded as a category 2*gold + pred, so category counts
per replicate are exactly (tn, fp, fn, tp).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_ONE = np.uint64(1)

#: Replicates per chunk; bounds the (chunk, n) uint64 index matrix in memory.
_CHUNK = 256


def _fmix64_np(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= _M1
    z ^= z >> np.uint64(27)
    z *= _M2
    z ^= z >> np.uint64(31)
    return z


def _counts_numpy(
    categories: np.ndarray, seed: np.uint64, first_replicate: int, n_replicates: int
) -> np.ndarray:
    n = categories.size
    reps = np.arange(first_replicate, first_replicate + n_replicates, dtype=np.uint64)
    base = _fmix64_np(seed + GAMMA * (reps + _ONE))
    draws = GAMMA * (np.arange(n, dtype=np.uint64) + _ONE)
    indices = _fmix64_np(base[:, None] ^ draws[None, :]) % np.uint64(n)
    sampled = categories[indices]
    counts = np.empty((n_replicates, 4), dtype=np.int64)
    for category in range(4):
        counts[:, category] = (sampled == category).sum(axis=1)
    return counts


_HAVE_NUMBA = False
if os.environ.get("GERCHEX_NO_NUMBA", "") not in ("1", "true", "yes"):
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        _HAVE_NUMBA = False


if _HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _counts_kernel(categories, seed, first_replicate, n_replicates, out):
        # Mirror of _counts_numpy; all arithmetic kept in uint64 so it wraps.
        n = np.uint64(categories.size)
        for r in range(n_replicates):
            z = seed + GAMMA * (np.uint64(first_replicate + r) + _ONE)
            z ^= z >> np.uint64(30)
            z *= _M1
            z ^= z >> np.uint64(27)
            z *= _M2
            z ^= z >> np.uint64(31)
            base = z
            for i in range(categories.size):
                z = base ^ (GAMMA * (np.uint64(i) + _ONE))
                z ^= z >> np.uint64(30)
                z *= _M1
                z ^= z >> np.uint64(27)
                z *= _M2
                z ^= z >> np.uint64(31)
                out[r, categories[z % n]] += 1

    def _counts_numba(
        categories: np.ndarray, seed: np.uint64, first_replicate: int, n_replicates: int
    ) -> np.ndarray:
        out = np.zeros((n_replicates, 4), dtype=np.int64)
        _counts_kernel(categories, seed, first_replicate, n_replicates, out)
        return out


def active_backend() -> str:
    """Which kernel drives resampling: 'numba' or 'numpy'."""
    return "numba" if _HAVE_NUMBA else "numpy"


def resample_counts(
    gold: np.ndarray,
    pred: np.ndarray,
    seed: int,
    resamples: int,
    workers: int = 1,
) -> np.ndarray:
    """(resamples, 4) confusion counts (tn, fp, fn, tp) per bootstrap replicate."""
    if gold.shape != pred.shape or gold.ndim != 1:
        raise ValueError("gold and pred must be 1-d arrays of equal length")
    if gold.size == 0:
        raise ValueError("cannot resample an empty evaluation set")
    categories = (2 * gold.astype(np.uint8) + pred.astype(np.uint8)).astype(np.uint8)
    seed64 = np.uint64(int(seed) % (1 << 64))
    run = _counts_numba if _HAVE_NUMBA else _counts_numpy
    chunks = [
        (start, min(_CHUNK, resamples - start)) for start in range(0, resamples, _CHUNK)
    ]
    if workers <= 1 or len(chunks) <= 1:
        parts = [run(categories, seed64, start, size) for start, size in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(lambda c: run(categories, seed64, c[0], c[1]), chunks)
            )
    return np.concatenate(parts, axis=0)

"""Counter-based pseudo-random numbers for reproducible simulations.

Every draw is a pure function of (seed, counter), so trials can run in any
order, chunked or parallel, with bit-identical results.  The mixer is the
splitmix64 finalizer; the counter-th word of a stream is
mix64(seed + (counter + 1) * GOLDEN), i.e. the splitmix64 sequence itself.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return (z ^ (z >> 31)) & MASK64


def rand_u64(seed: int, counter: int) -> int:
    """The counter-th 64-bit word of the stream started at seed."""
    return mix64((seed + (counter + 1) * GOLDEN) & MASK64)


def substream(seed: int, index: int) -> int:
    """Derive an independent stream seed (one per trial, attempt, ...)."""
    return rand_u64(seed, index)


def uniform01(seed: int, counter: int) -> float:
    """Uniform in [0, 1) with 53-bit resolution."""
    return (rand_u64(seed, counter) >> 11) * 2.0 ** -53


def rand_u64_array(seed: int, counters: np.ndarray) -> np.ndarray:
    """Vectorised rand_u64 for a uint64 counter array."""
    g = np.uint64(GOLDEN)
    z = (np.uint64(seed & MASK64) + (counters.astype(np.uint64) + np.uint64(1)) * g)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def rand_u64_grid(seeds: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Vectorised rand_u64 over a (seed, counter) grid.

    Returns shape (len(seeds), len(counters)); entry [i, j] equals
    rand_u64(seeds[i], counters[j]).
    """
    g = np.uint64(GOLDEN)
    z = seeds.astype(np.uint64)[:, None] + (counters.astype(np.uint64) + np.uint64(1))[None, :] * g
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def shuffled(items, seed: int) -> list:
    """Deterministic Fisher-Yates shuffle driven by the counter stream."""
    out = list(items)
    for k in range(len(out) - 1, 0, -1):
        j = rand_u64(seed, k) % (k + 1)
        out[k], out[j] = out[j], out[k]
    return out

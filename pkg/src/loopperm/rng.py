"""Deterministic substreams for parallel sampling.

Sampling work is split into fixed-size chunks of replicas; chunk c of a run
seeded with s draws from a counter-based generator keyed by (s, c).  The
chunk->stream mapping never depends on how chunks are distributed over
workers, so results are reproducible for any worker count.
"""

from __future__ import annotations

import numpy as np

CHUNK_SIZE = 4096

_MASK64 = (1 << 64) - 1


def substream(seed: int, index: int) -> np.random.Generator:
    key = ((int(seed) & _MASK64) << 64) | (int(index) & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def chunk_ranges(count: int, chunk_size: int = CHUNK_SIZE):
    """Yield (chunk_index, start, stop) triples covering range(count)."""
    index = 0
    start = 0
    while start < count:
        stop = min(start + chunk_size, count)
        yield index, start, stop
        index += 1
        start = stop

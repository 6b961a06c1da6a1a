"""Poisson ensembles of Markov loops and their occupation fields.

A soup with intensity alpha contains Poisson(alpha * total mass) loops drawn
independently from the normalized loop measure.  A loop is drawn by first
picking its length n (mass trace(P^n)/n), then its starting point from the
diagonal of P^n, then bridging back to the start step by step.  Rooted
draws are folded to unrooted loops by rotation canonicalization.

Bulk sampling is organized in fixed-size replica chunks, each with its own
counter-based random stream, so results are identical for any worker count.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .chains import SubMarkovChain
from .errors import ConsistencyError, DomainError
from .graphs import Crossing
from .loops import UnrootedLoop, total_mass
from .rng import chunk_ranges, substream

MAX_LOOP_STEPS = 10**6


@dataclass(frozen=True)
class LoopSoupSample:
    """One soup realization: a multiset of unrooted loops."""

    vertex_count: int
    alpha: float
    seed: int
    loops: tuple[tuple[UnrootedLoop, int], ...]

    def loop_count(self) -> int:
        return sum(mult for _, mult in self.loops)

    def to_json(self, labels: Sequence[str] | None = None) -> dict:
        flat: list[str] = []
        for loop, mult in self.loops:
            flat.extend([loop.format(labels)] * mult)
        return {"seed": self.seed, "loops": flat}


@dataclass(frozen=True)
class OccupationFields:
    theta: tuple[int, ...]
    crossings: Crossing


def occupation_fields(sample: LoopSoupSample) -> OccupationFields:
    """Visit counts per vertex and crossing counts per ordered pair.

    A loop of length n contributes n visits in total; repeated loops count
    with their multiplicity.  The row and column sums of the crossing field
    both reproduce the visit field, which is asserted here.
    """
    d = sample.vertex_count
    theta = [0] * d
    cross = [[0] * d for _ in range(d)]
    for loop, mult in sample.loops:
        for x, y in loop.steps():
            cross[x][y] += mult
            theta[x] += mult
    for x in range(d):
        row = sum(cross[x])
        col = sum(cross[y][x] for y in range(d))
        if not theta[x] == row == col:
            raise ConsistencyError("occupation fields lost the flow balance")
    return OccupationFields(theta=tuple(theta),
                            crossings=tuple(tuple(r) for r in cross))


class LoopSampler:
    """Precomputed tables for drawing loops from one chain."""

    def __init__(self, chain: SubMarkovChain, max_steps: int = MAX_LOOP_STEPS):
        self.d = chain.d
        self.p = chain.to_float_rows()
        self.total = total_mass(chain)
        self.max_steps = max_steps
        self._pow_np = [np.eye(self.d), np.array(self.p, dtype=float)]
        self.powers: list[list[list[float]]] = [m.tolist() for m in self._pow_np]
        self.traces = [float(self.d), float(np.trace(self._pow_np[1]))]
        # A chain with no closed paths has zero total mass; every soup is
        # empty and no loop is ever drawn.
        first = self.traces[1] / self.total if self.total > 0 else 1.0
        self.length_cdf = [0.0, first]

    def _extend(self) -> None:
        nxt = self._pow_np[-1] @ self._pow_np[1]
        self._pow_np.append(nxt)
        self.powers.append(nxt.tolist())
        n = len(self._pow_np) - 1
        self.traces.append(float(np.trace(nxt)))
        self.length_cdf.append(self.length_cdf[-1] + self.traces[n] / (n * self.total))

    def draw_length(self, rng: np.random.Generator) -> int:
        if self.total <= 0:
            raise ConsistencyError("the loop measure has no mass; nothing to draw")
        u = rng.random()
        n = 1
        while self.length_cdf[n] < u:
            n += 1
            if n >= len(self.length_cdf):
                if n > self.max_steps:
                    raise ConsistencyError(
                        "loop length sampling exceeded the safety cap; "
                        "the chain may be numerically non-transient"
                    )
                self._extend()
        return n

    def draw_rooted(self, rng: np.random.Generator) -> tuple[int, ...]:
        n = self.draw_length(rng)
        powers = self.powers
        pn = powers[n]
        r = rng.random() * self.traces[n]
        acc = 0.0
        root = self.d - 1
        for x in range(self.d):
            acc += pn[x][x]
            if r < acc:
                root = x
                break
        seq = [root]
        z = root
        p = self.p
        for k in range(n - 1):
            back = powers[n - k - 1]
            row = p[z]
            weights = [row[y] * back[y][root] for y in range(self.d)]
            tot = sum(weights)
            r = rng.random() * tot
            acc = 0.0
            y = self.d - 1
            for cand in range(self.d):
                acc += weights[cand]
                if r < acc:
                    y = cand
                    break
            seq.append(y)
            z = y
        return tuple(seq)


def sample_soup(chain: SubMarkovChain, alpha: float, seed: int) -> LoopSoupSample:
    """Draw a single soup (replica 0 of the stream for this seed)."""
    _check_alpha(alpha)
    sampler = LoopSampler(chain)
    rng = substream(seed, 0)
    k = int(rng.poisson(float(alpha) * sampler.total))
    counts: Counter = Counter()
    for _ in range(k):
        counts[UnrootedLoop.from_rooted(sampler.draw_rooted(rng))] += 1
    loops = tuple(sorted(counts.items(), key=lambda kv: kv[0].vertices))
    return LoopSoupSample(vertex_count=chain.d, alpha=float(alpha),
                          seed=int(seed), loops=loops)


def iter_soup_samples(chain: SubMarkovChain, alpha: float, seed: int,
                      count: int) -> Iterator[LoopSoupSample]:
    """Soups for replicas 0..count-1 in order, chunked as in bulk sampling."""
    _check_alpha(alpha)
    sampler = LoopSampler(chain)
    for chunk, start, stop in chunk_ranges(count):
        rng = substream(seed, chunk)
        ks = rng.poisson(float(alpha) * sampler.total, size=stop - start)
        for k in ks:
            counts: Counter = Counter()
            for _ in range(int(k)):
                counts[UnrootedLoop.from_rooted(sampler.draw_rooted(rng))] += 1
            loops = tuple(sorted(counts.items(), key=lambda kv: kv[0].vertices))
            yield LoopSoupSample(vertex_count=chain.d, alpha=float(alpha),
                                 seed=int(seed), loops=loops)


@dataclass
class SoupStats:
    """Aggregated occupation-field outcomes over many soup replicas."""

    vertex_count: int
    total: int = 0
    empty: int = 0
    loops_total: int = 0
    theta: Counter = field(default_factory=Counter)
    crossings: Counter = field(default_factory=Counter)
    configs: Counter | None = None

    def merge(self, other: "SoupStats") -> "SoupStats":
        self.total += other.total
        self.empty += other.empty
        self.loops_total += other.loops_total
        self.theta.update(other.theta)
        self.crossings.update(other.crossings)
        if self.configs is not None and other.configs is not None:
            self.configs.update(other.configs)
        return self


def _zero_keys(d: int) -> tuple[tuple[int, ...], Crossing]:
    return (0,) * d, tuple((0,) * d for _ in range(d))


def _sample_chunk(chain: SubMarkovChain, alpha: float, seed: int,
                  chunk: int, n_replicas: int, collect_configs: bool) -> SoupStats:
    sampler = LoopSampler(chain)
    rng = substream(seed, chunk)
    d = chain.d
    stats = SoupStats(vertex_count=d,
                      configs=Counter() if collect_configs else None)
    zero_theta, zero_cross = _zero_keys(d)
    ks = rng.poisson(float(alpha) * sampler.total, size=n_replicas)
    draw = sampler.draw_rooted
    theta_counter = stats.theta
    cross_counter = stats.crossings
    for k in ks:
        stats.total += 1
        stats.loops_total += int(k)
        if k == 0:
            stats.empty += 1
            theta_counter[zero_theta] += 1
            cross_counter[zero_cross] += 1
            if stats.configs is not None:
                stats.configs[()] += 1
            continue
        theta = [0] * d
        cross = [[0] * d for _ in range(d)]
        rooted_loops = []
        for _ in range(int(k)):
            loop = draw(rng)
            rooted_loops.append(loop)
            prev = loop[-1]
            for v in loop:
                theta[v] += 1
                cross[prev][v] += 1
                prev = v
        theta_counter[tuple(theta)] += 1
        cross_counter[tuple(tuple(r) for r in cross)] += 1
        if stats.configs is not None:
            counts: Counter = Counter()
            for loop in rooted_loops:
                counts[tuple(min(loop[i:] + loop[:i] for i in range(len(loop))))] += 1
            stats.configs[tuple(sorted(counts.items()))] += 1
    return stats


def _sample_chunk_star(args) -> SoupStats:
    return _sample_chunk(*args)


def collect_soup_stats(chain: SubMarkovChain, alpha: float, seed: int, count: int,
                       workers: int = 1, collect_configs: bool = False) -> SoupStats:
    """Occupation-field statistics over ``count`` independent soups.

    Deterministic in (seed, count) regardless of ``workers``.
    """
    _check_alpha(alpha)
    if count < 0:
        raise DomainError("sample count must be nonnegative")
    jobs = [(chain, float(alpha), int(seed), chunk, stop - start, collect_configs)
            for chunk, start, stop in chunk_ranges(count)]
    stats = SoupStats(vertex_count=chain.d,
                      configs=Counter() if collect_configs else None)
    if workers <= 1 or len(jobs) <= 1:
        for job in jobs:
            stats.merge(_sample_chunk_star(job))
        return stats
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_sample_chunk_star, jobs, chunksize=4):
            stats.merge(part)
    return stats


def _records_chunk(chain: SubMarkovChain, alpha: float, seed: int, chunk: int,
                   start: int, n_replicas: int) -> list[tuple[str, int]]:
    """(serialized record, loop count) pairs for one chunk, in replica order."""
    from .serialize import dumps_canonical

    sampler = LoopSampler(chain)
    rng = substream(seed, chunk)
    ks = rng.poisson(float(alpha) * sampler.total, size=n_replicas)
    lines = []
    for offset, k in enumerate(ks):
        counts: Counter = Counter()
        for _ in range(int(k)):
            counts[UnrootedLoop.from_rooted(sampler.draw_rooted(rng))] += 1
        flat: list[str] = []
        for loop, mult in sorted(counts.items(), key=lambda kv: kv[0].vertices):
            flat.extend([loop.format(chain.labels)] * mult)
        record = dumps_canonical(
            {"seed": int(seed), "replica": start + offset, "loops": flat}
        )
        lines.append((record, int(k)))
    return lines


def _records_chunk_star(args) -> list[tuple[str, int]]:
    return _records_chunk(*args)


def write_soup_records(chain: SubMarkovChain, alpha: float, seed: int, count: int,
                       fh, workers: int = 1) -> tuple[int, int]:
    """Stream newline-delimited JSON soup records, one per replica, in order.

    Record content is identical for any worker count.  Returns the number of
    empty soups and the total loop count over all replicas.
    """
    _check_alpha(alpha)
    jobs = [(chain, float(alpha), int(seed), chunk, start, stop - start)
            for chunk, start, stop in chunk_ranges(count)]
    if workers <= 1 or len(jobs) <= 1:
        parts = map(_records_chunk_star, jobs)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        parts = pool.map(_records_chunk_star, jobs, chunksize=4)
    empty = 0
    loops_total = 0
    try:
        for lines in parts:
            for line, k in lines:
                fh.write(line + "\n")
                empty += k == 0
                loops_total += k
    finally:
        if pool is not None:
            pool.shutdown()
    return empty, loops_total


def _check_alpha(alpha: float) -> None:
    if not float(alpha) > 0:
        raise DomainError("soup intensity alpha must be positive")

"""Rooted and unrooted oriented loops, their multiplicity, and the loop measure.

An unrooted loop is a rotation-equivalence class of a cyclic vertex
sequence; orientation is preserved, never reversed.  The canonical
representative is the lexicographically smallest rotation.  The measure of
a loop is the product of its transition probabilities divided by its
multiplicity (the largest J such that the loop is a J-fold concatenation of
a shorter one), and the measure of all loops together is -log det(I - P).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .chains import SubMarkovChain, det_I_minus_P
from .errors import DomainError


def canonical_rotation(vertices: Sequence[int]) -> tuple[int, ...]:
    seq = tuple(vertices)
    if not seq:
        raise DomainError("a loop must visit at least one vertex")
    n = len(seq)
    return min(seq[k:] + seq[:k] for k in range(n))


def rotation_multiplicity(vertices: Sequence[int]) -> int:
    """Largest J such that the sequence is J copies of a shorter loop."""
    seq = tuple(vertices)
    n = len(seq)
    for period in range(1, n + 1):
        if n % period:
            continue
        if seq == seq[period:] + seq[:period]:
            return n // period
    return 1


@dataclass(frozen=True)
class UnrootedLoop:
    vertices: tuple[int, ...]  # canonical rotation

    @classmethod
    def from_rooted(cls, vertices: Sequence[int]) -> "UnrootedLoop":
        return cls(canonical_rotation(vertices))

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def multiplicity(self) -> int:
        return rotation_multiplicity(self.vertices)

    def steps(self):
        seq = self.vertices
        prev = seq[-1]
        for v in seq:
            yield prev, v
            prev = v

    def format(self, labels: Sequence[str] | None = None) -> str:
        if labels is None:
            return ",".join(str(v + 1) for v in self.vertices)
        return ",".join(labels[v] for v in self.vertices)

    @classmethod
    def parse(cls, text: str, labels: Sequence[str] | None = None) -> "UnrootedLoop":
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise DomainError("empty loop text")
        if labels is None:
            vertices = [int(p) - 1 for p in parts]
        else:
            index = {lab: i for i, lab in enumerate(labels)}
            try:
                vertices = [index[p] for p in parts]
            except KeyError as exc:
                raise DomainError(f"unknown vertex label {exc.args[0]!r}") from exc
        return cls.from_rooted(vertices)


def loop_measure(loop: UnrootedLoop | Sequence[int], chain: SubMarkovChain):
    """Product of transition probabilities around the loop over its multiplicity.

    A loop using a zero-probability transition has measure zero; that is not
    an error.
    """
    if not isinstance(loop, UnrootedLoop):
        loop = UnrootedLoop.from_rooted(loop)
    weight = None
    for x, y in loop.steps():
        if not 0 <= x < chain.d:
            raise DomainError("loop leaves the vertex set")
        p = chain.matrix.entries[x][y]
        weight = p if weight is None else weight * p
        if weight == 0:
            return weight
    return weight / loop.multiplicity


def total_mass(chain: SubMarkovChain) -> float:
    """Total loop measure, -log det(I - P)."""
    return -math.log(float(det_I_minus_P(chain)))

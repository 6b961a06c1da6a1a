"""Square matrices with dual exact-rational / floating entry modes.

Exact mode keeps every entry as a ``fractions.Fraction`` so permanent and
determinant identities can be asserted with zero tolerance; float mode is
for simulation inputs.  The mode is recorded on the matrix and uniform
across entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import DomainError

RATIONAL = "rational"
FLOAT = "float"

Scalar = Union[Fraction, float]
BlockSpec = tuple[int, ...]


@dataclass(frozen=True)
class SquareMatrix:
    d: int
    mode: str
    entries: tuple[tuple[Scalar, ...], ...]

    @classmethod
    def build(cls, rows: Sequence[Sequence], mode: str = RATIONAL) -> "SquareMatrix":
        d = len(rows)
        if d < 1:
            raise DomainError("matrix dimension must be positive")
        if any(len(r) != d for r in rows):
            raise DomainError("matrix must be square")
        if mode == RATIONAL:
            conv = tuple(tuple(_as_fraction(x) for x in r) for r in rows)
        elif mode == FLOAT:
            conv = tuple(tuple(float(x) for x in r) for r in rows)
        else:
            raise DomainError(f"unknown scalar mode {mode!r}")
        return cls(d=d, mode=mode, entries=conv)

    @classmethod
    def rational(cls, rows: Sequence[Sequence]) -> "SquareMatrix":
        return cls.build(rows, RATIONAL)

    @classmethod
    def floating(cls, rows: Sequence[Sequence]) -> "SquareMatrix":
        return cls.build(rows, FLOAT)

    @classmethod
    def zeros(cls, d: int, mode: str = RATIONAL) -> "SquareMatrix":
        return cls.build([[0] * d for _ in range(d)], mode)

    @classmethod
    def identity(cls, d: int, mode: str = RATIONAL) -> "SquareMatrix":
        return cls.build([[1 if i == j else 0 for j in range(d)] for i in range(d)], mode)

    def entry(self, i: int, j: int) -> Scalar:
        return self.entries[i][j]

    def to_float_rows(self) -> list[list[float]]:
        return [[float(x) for x in row] for row in self.entries]

    def as_mode(self, mode: str) -> "SquareMatrix":
        if mode == self.mode:
            return self
        if mode == FLOAT:
            return SquareMatrix.floating(self.to_float_rows())
        raise DomainError("cannot promote float entries to exact rationals")

    # -- JSON wire format ---------------------------------------------------

    def to_json(self) -> dict:
        if self.mode == RATIONAL:
            rows = [[str(x) for x in row] for row in self.entries]
        else:
            rows = [[float(x) for x in row] for row in self.entries]
        return {"d": self.d, "mode": self.mode, "entries": rows}

    @classmethod
    def from_json(cls, data: dict) -> "SquareMatrix":
        try:
            d = int(data["d"])
            mode = data["mode"]
            rows = data["entries"]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed matrix JSON: {exc}") from exc
        if len(rows) != d:
            raise DomainError("matrix JSON: entry grid does not match d")
        return cls.build(rows, mode)


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise DomainError("float entry in rational-mode matrix; use mode 'float'")
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"bad rational literal {x!r}") from exc
    return Fraction(x)


def check_block_spec(q: Sequence[int], d: int) -> BlockSpec:
    q = tuple(int(x) for x in q)
    if len(q) != d:
        raise DomainError(f"block spec has length {len(q)}, expected {d}")
    if any(x < 0 for x in q):
        raise DomainError("block spec entries must be nonnegative")
    return q


def block_expand(matrix: SquareMatrix, q: Sequence[int]) -> tuple[SquareMatrix, tuple[int, ...]]:
    """Repeat index i of the matrix q[i] times.

    Returns the expanded matrix of order sum(q) together with the map from
    expanded row index to base index.  Rows and columns of all copies of a
    base pair (i, j) carry the constant entry (i, j).
    """
    q = check_block_spec(q, matrix.d)
    base_map: list[int] = []
    for i, count in enumerate(q):
        base_map.extend([i] * count)
    if not base_map:
        raise DomainError("empty block expansion (all repetition counts are zero)")
    rows = [
        [matrix.entries[bi][bj] for bj in base_map]
        for bi in base_map
    ]
    return SquareMatrix.build(rows, matrix.mode), tuple(base_map)

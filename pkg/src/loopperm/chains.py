"""Sub-Markovian transition matrices, Green functions, and the two structure
reductions (harmonic transform to a root, self-loop star expansion).

A chain here is a nonnegative matrix with row sums at most one; the deficit
of each row is the killing probability of that state.  Transience is
required and checked through the spectral radius.  Exact rational chains
support zero-tolerance determinant identities; float chains are used for
simulation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, StructureError
from .graphs import Crossing, InducedGraph, graph_of_matrix
from .linalg import exact_det, exact_inverse, exact_solve
from .matrices import RATIONAL, SquareMatrix

SPECTRAL_RADIUS_TOL = 1e-10
ROW_SUM_TOL = 1e-12


@dataclass(frozen=True)
class SubMarkovChain:
    matrix: SquareMatrix
    labels: tuple[str, ...]
    killing: tuple
    spectral_radius: float

    @property
    def d(self) -> int:
        return self.matrix.d

    @property
    def mode(self) -> str:
        return self.matrix.mode

    def graph(self) -> InducedGraph:
        return graph_of_matrix(self.matrix)

    def to_float_rows(self) -> list[list[float]]:
        return self.matrix.to_float_rows()

    def to_json(self) -> dict:
        data = self.matrix.to_json()
        data["labels"] = list(self.labels)
        return data

    @classmethod
    def from_json(cls, data: dict) -> "SubMarkovChain":
        matrix = SquareMatrix.from_json(data)
        labels = data.get("labels")
        return validate_chain(matrix, labels)


def validate_chain(matrix: SquareMatrix, labels: Sequence[str] | None = None) -> SubMarkovChain:
    """Construct a chain, or report which invariant fails.

    Checks entrywise nonnegativity, sub-stochastic row sums (exact in
    rational mode, 1e-12 slack in float mode), and transience via spectral
    radius strictly below 1 - 1e-10.
    """
    d = matrix.d
    if labels is None:
        labels = tuple(str(i + 1) for i in range(d))
    else:
        labels = tuple(str(x) for x in labels)
        if len(labels) != d:
            raise DomainError("label list does not match matrix dimension")
    killing = []
    for i, row in enumerate(matrix.entries):
        for x in row:
            if x < 0:
                raise DomainError(f"negative transition probability in row {i + 1}")
        s = sum(row)
        if matrix.mode == RATIONAL:
            if s > 1:
                raise DomainError(f"row {i + 1} sums to {s} > 1")
            killing.append(Fraction(1) - s)
        else:
            if s > 1 + ROW_SUM_TOL:
                raise DomainError(f"row {i + 1} sums to {s} > 1")
            killing.append(max(0.0, 1.0 - s))
    rho = float(max(abs(np.linalg.eigvals(np.array(matrix.to_float_rows()))))) if d else 0.0
    if rho >= 1 - SPECTRAL_RADIUS_TOL:
        raise DomainError(
            f"chain is not transient: spectral radius {rho:.12f} is not below 1"
        )
    return SubMarkovChain(matrix=matrix, labels=labels, killing=tuple(killing),
                          spectral_radius=rho)


def det_I_minus_P(chain: SubMarkovChain):
    rows = _i_minus_p(chain.matrix)
    if chain.mode == RATIONAL:
        return exact_det(rows)
    return float(np.linalg.det(np.array(rows, dtype=float)))


def green_function(chain: SubMarkovChain) -> SquareMatrix:
    """Green's function (I - P)^{-1}; exact inverse in rational mode."""
    rows = _i_minus_p(chain.matrix)
    if chain.mode == RATIONAL:
        inv = exact_inverse(rows)
        return SquareMatrix.build(inv, RATIONAL)
    inv = np.linalg.inv(np.array(rows, dtype=float))
    return SquareMatrix.floating(inv.tolist())


def _i_minus_p(matrix: SquareMatrix) -> list[list]:
    one = Fraction(1) if matrix.mode == RATIONAL else 1.0
    return [
        [(one if i == j else 0 * one) - matrix.entries[i][j] for j in range(matrix.d)]
        for i in range(matrix.d)
    ]


def restricted_chain(chain: SubMarkovChain, keep: Sequence[int]) -> SubMarkovChain:
    """Chain killed at all vertices outside ``keep`` (rows/columns removed)."""
    keep = list(keep)
    if not keep:
        raise DomainError("restriction must keep at least one vertex")
    rows = [[chain.matrix.entries[i][j] for j in keep] for i in keep]
    matrix = SquareMatrix.build(rows, chain.mode)
    labels = tuple(chain.labels[i] for i in keep)
    return validate_chain(matrix, labels)


@dataclass
class DetIdentityReport:
    ordering: tuple[int, ...]
    det: object
    green_diagonal_terms: list
    product_inverse: object
    matches: bool

    def to_json(self) -> dict:
        def render(x):
            return str(x) if isinstance(x, Fraction) else float(x)

        return {
            "ordering": [i + 1 for i in self.ordering],
            "det": render(self.det),
            "green_diagonal_terms": [render(t) for t in self.green_diagonal_terms],
            "product_inverse": render(self.product_inverse),
            "matches": self.matches,
        }


def det_identity_check(chain: SubMarkovChain, ordering: Sequence[int]) -> DetIdentityReport:
    """Verify det(I-P) against the telescoping product of Green diagonals.

    Peeling vertices in the given order, the product of G_{remaining}(x, x)
    over the peel equals 1/det(I-P) for every ordering.
    """
    ordering = tuple(ordering)
    if sorted(ordering) != list(range(chain.d)):
        raise DomainError("ordering must be a permutation of the vertex set")
    det = det_I_minus_P(chain)
    remaining = list(range(chain.d))
    terms = []
    product = Fraction(1) if chain.mode == RATIONAL else 1.0
    for x in ordering:
        sub = restricted_chain(chain, remaining) if len(remaining) < chain.d else chain
        g = green_function(sub)
        pos = remaining.index(x)
        term = g.entries[pos][pos]
        terms.append(term)
        product *= term
        remaining.remove(x)
    inverse = 1 / product
    if chain.mode == RATIONAL:
        matches = inverse == det
    else:
        matches = abs(float(inverse) - float(det)) <= 1e-10 * max(1.0, abs(float(det)))
    return DetIdentityReport(ordering=ordering, det=det,
                             green_diagonal_terms=terms,
                             product_inverse=inverse, matches=matches)


def h_transform(chain: SubMarkovChain, root: int) -> tuple[SubMarkovChain, tuple]:
    """Condition the chain to hit the root before dying.

    h(x) is the probability of ever reaching the root from x (h(root) = 1,
    harmonic elsewhere); the transformed matrix is P_xy h(y) / h(x).  All
    rows except the root become stochastic, so the transformed chain is
    killed only at the root.  Requires h > 0 everywhere.
    """
    d = chain.d
    if not 0 <= root < d:
        raise DomainError("root vertex out of range")
    others = [i for i in range(d) if i != root]
    if chain.mode == RATIONAL:
        if others:
            a = [[(Fraction(1) if i == j else Fraction(0)) - chain.matrix.entries[i][j]
                  for j in others] for i in others]
            b = [chain.matrix.entries[i][root] for i in others]
            sol = exact_solve(a, b)
        else:
            sol = []
        h = [Fraction(0)] * d
        h[root] = Fraction(1)
        for idx, x in enumerate(others):
            h[x] = sol[idx]
        if any(v <= 0 for v in h):
            raise StructureError("root is unreachable from part of the chain")
        rows = [[chain.matrix.entries[i][j] * h[j] / h[i] for j in range(d)]
                for i in range(d)]
        matrix = SquareMatrix.build(rows, RATIONAL)
    else:
        p = np.array(chain.to_float_rows())
        h = np.zeros(d)
        h[root] = 1.0
        if others:
            sub = np.eye(len(others)) - p[np.ix_(others, others)]
            rhs = p[others, root]
            h[others] = np.linalg.solve(sub, rhs)
        if np.any(h <= 0):
            raise StructureError("root is unreachable from part of the chain")
        rows = (p * h[None, :] / h[:, None]).tolist()
        matrix = SquareMatrix.floating(rows)
        h = h.tolist()
    return validate_chain(matrix, chain.labels), tuple(h)


@dataclass(frozen=True)
class StarExpansion:
    """Bookkeeping for the self-loop removal: star index -> base vertex."""

    base_d: int
    base_of: tuple[int, ...]
    copy_index: tuple[int | None, ...]  # per base vertex, index of its copy or None

    def project_crossing(self, n_star: Crossing) -> Crossing:
        """Fold copy vertices back: crossings into the copy of x become the
        self-loop count at x."""
        d = self.base_d
        n = [[0] * d for _ in range(d)]
        for i, row in enumerate(n_star):
            for j, val in enumerate(row):
                if not val:
                    continue
                if i >= d and j < d:
                    # Return leg of a self-loop excursion; the outbound leg
                    # into the copy already accounts for the traversal.
                    continue
                n[self.base_of[i]][self.base_of[j]] += val
        return tuple(tuple(row) for row in n)


def star_expand(chain: SubMarkovChain, full: bool = False) -> tuple[SubMarkovChain, StarExpansion]:
    """Replace each self-loop with a two-step excursion through a copy vertex.

    The copy of x receives the self-loop mass P_xx and returns to x with
    probability one, so the expanded sparsity graph has no self-loops and
    det(I - P) is preserved.  By default only self-looped vertices get
    copies; ``full=True`` materializes a copy of every vertex.
    """
    d = chain.d
    zero = Fraction(0) if chain.mode == RATIONAL else 0.0
    one = Fraction(1) if chain.mode == RATIONAL else 1.0
    needs_copy = [
        full or chain.matrix.entries[x][x] != 0
        for x in range(d)
    ]
    copy_index: list[int | None] = [None] * d
    base_of = list(range(d))
    for x in range(d):
        if needs_copy[x]:
            copy_index[x] = len(base_of)
            base_of.append(x)
    m = len(base_of)
    rows = [[zero] * m for _ in range(m)]
    for x in range(d):
        for y in range(d):
            if x == y:
                continue
            rows[x][y] = chain.matrix.entries[x][y]
        if chain.matrix.entries[x][x] != 0:
            rows[x][copy_index[x]] = chain.matrix.entries[x][x]
        if copy_index[x] is not None:
            rows[copy_index[x]][x] = one
    labels = list(chain.labels) + [
        f"{chain.labels[x]}*" for x in range(d) if copy_index[x] is not None
    ]
    matrix = SquareMatrix.build(rows, chain.mode)
    expansion = StarExpansion(base_d=d, base_of=tuple(base_of),
                              copy_index=tuple(copy_index))
    return validate_chain(matrix, labels), expansion

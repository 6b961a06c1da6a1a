"""Exact alpha-permanent evaluation.

Three routes are provided and cross-checked against each other:

* ``per_alpha_brute`` enumerates permutations directly.  The enumeration
  walks cycle decompositions depth-first (each cycle is rooted at its
  smallest element), multiplying matrix entries as it goes, so branches
  through zero entries are pruned immediately and the cycle count is known
  for free when a permutation completes.
* ``expansion_by_crossing`` groups the same enumeration by the crossing
  matrix of the permutation, giving the coefficient polynomial of each
  monomial in the matrix entries.
* ``per_alpha_starforest`` evaluates the closed form available when the
  sparsity graph is a star-forest: a sum over the crossing-support set of
  rising-factorial coefficients times entry monomials.  No permutations are
  enumerated on this route.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .alphapoly import AlphaPolynomial, factorial_fraction
from .errors import ConsistencyError, SizeCapError, StructureError
from .graphs import (
    Crossing,
    graph_of_matrix,
    is_sourceless,
    row_sums,
    tq_enumerate,
)
from .matrices import RATIONAL, SquareMatrix, block_expand, check_block_spec

DEFAULT_BRUTE_CAP = 9

MonomialExpansion = dict[Crossing, AlphaPolynomial]


def _check_cap(order: int, cap: int | None) -> None:
    cap = DEFAULT_BRUTE_CAP if cap is None else cap
    if order > cap:
        raise SizeCapError(
            f"permutation enumeration over order {order} exceeds the cap of {cap}"
        )


def brute_coeff_list(matrix: SquareMatrix, cap: int | None = None) -> list:
    """Coefficient list of the alpha-permanent, index k = weight of alpha**k.

    Works in either scalar mode; coefficients are Fractions for rational
    matrices and floats otherwise.
    """
    m = matrix.d
    _check_cap(m, cap)
    rows = matrix.entries
    rational = matrix.mode == RATIONAL
    one = Fraction(1) if rational else 1.0
    zero = Fraction(0) if rational else 0.0
    coeffs = [zero] * (m + 1)
    full = (1 << m) - 1

    def dfs(used: int, start: int, cur: int, prod, closed: int) -> None:
        w = rows[cur][start]
        if w != 0:
            p2 = prod * w
            if used == full:
                coeffs[closed + 1] += p2
            else:
                nxt = ((used + 1) & ~used).bit_length() - 1  # lowest unused index
                dfs(used | (1 << nxt), nxt, nxt, p2, closed + 1)
        for j in range(m):
            bit = 1 << j
            if not used & bit:
                w = rows[cur][j]
                if w != 0:
                    dfs(used | bit, start, j, prod * w, closed)

    dfs(1, 0, 0, one, 0)
    return coeffs


def per_alpha_brute(matrix: SquareMatrix, cap: int | None = None) -> AlphaPolynomial:
    """Sum alpha**cycles(pi) times the entry product, over all permutations."""
    if matrix.mode != RATIONAL:
        raise StructureError("exact alpha-permanents require a rational-mode matrix")
    return AlphaPolynomial(brute_coeff_list(matrix, cap))


def per_alpha_block(
    matrix: SquareMatrix, q: Sequence[int], cap: int | None = None
) -> AlphaPolynomial:
    """Alpha-permanent of the block expansion of the matrix; 1 for q = 0."""
    q = check_block_spec(q, matrix.d)
    if sum(q) == 0:
        return AlphaPolynomial.one()
    expanded, _ = block_expand(matrix, q)
    return per_alpha_brute(expanded, cap)


def block_coeff_list(matrix: SquareMatrix, q: Sequence[int], cap: int | None = None) -> list:
    """Mode-generic coefficient list for the block alpha-permanent."""
    q = check_block_spec(q, matrix.d)
    if sum(q) == 0:
        return [Fraction(1)] if matrix.mode == RATIONAL else [1.0]
    expanded, _ = block_expand(matrix, q)
    return brute_coeff_list(expanded, cap)


def crossing_of_permutation(pi: Sequence[int], base_map: Sequence[int],
                            d: int | None = None) -> Crossing:
    """Count, per ordered base pair (i, j), how many copies of i map to copies of j.

    ``d`` pins the base dimension; without it, trailing vertices with zero
    copies are not representable and the dimension is inferred from the map.
    """
    if d is None:
        d = max(base_map) + 1 if base_map else 0
    n = [[0] * d for _ in range(d)]
    for pos, target in enumerate(pi):
        n[base_map[pos]][base_map[target]] += 1
    return tuple(tuple(row) for row in n)


def expansion_by_crossing(
    matrix: SquareMatrix, q: Sequence[int], cap: int | None = None
) -> MonomialExpansion:
    """Group the brute-force enumeration by crossing matrix.

    Keys are the crossings realized by permutations whose entry product is
    nonzero; the coefficient attached to each key is the full cycle-count
    polynomial of that crossing class, and multiplying each key's polynomial
    by its entry monomial and summing reconstructs the block alpha-permanent.
    """
    q = check_block_spec(q, matrix.d)
    m = sum(q)
    d = matrix.d
    if m == 0:
        zero_key = tuple(tuple(0 for _ in range(d)) for _ in range(d))
        return {zero_key: AlphaPolynomial.one()}
    _check_cap(m, cap)
    expanded, base_map = block_expand(matrix, q)
    rows = expanded.entries
    terms: dict[Crossing, list[Fraction]] = {}
    full = (1 << m) - 1
    cross = [[0] * d for _ in range(d)]

    def dfs(used: int, start: int, cur: int, closed: int) -> None:
        if rows[cur][start] != 0:
            bi, bj = base_map[cur], base_map[start]
            cross[bi][bj] += 1
            if used == full:
                key = tuple(tuple(r) for r in cross)
                bucket = terms.setdefault(key, [Fraction(0)] * (m + 2))
                bucket[closed + 1] += 1
            else:
                nxt = ((used + 1) & ~used).bit_length() - 1
                dfs(used | (1 << nxt), nxt, nxt, closed + 1)
            cross[bi][bj] -= 1
        for j in range(m):
            bit = 1 << j
            if not used & bit and rows[cur][j] != 0:
                bi, bj = base_map[cur], base_map[j]
                cross[bi][bj] += 1
                dfs(used | bit, start, j, closed)
                cross[bi][bj] -= 1

    dfs(1, 0, 0, 0)
    return {key: AlphaPolynomial(cs) for key, cs in sorted(terms.items())}


def crossing_alpha_sum(q: Sequence[int], n: Crossing) -> AlphaPolynomial:
    """Cycle-count polynomial of one crossing class, by direct enumeration.

    Enumerates the permutations of the copy set whose crossing equals n,
    pruning any branch that would overdraw the per-pair budget n[i][j].
    Unlike ``expansion_by_crossing`` this never looks at matrix entries, so
    it also covers crossing matrices whose entry monomial happens to vanish.
    """
    d = len(n)
    q = check_block_spec(q, d)
    if not is_sourceless(n) or row_sums(n) != q:
        raise ConsistencyError("crossing matrix is not sourceless with row sums q")
    m = sum(q)
    if m == 0:
        return AlphaPolynomial.one()
    base_map: list[int] = []
    for i, count in enumerate(q):
        base_map.extend([i] * count)
    rem = [list(row) for row in n]
    coeffs = [Fraction(0)] * (m + 1)
    full = (1 << m) - 1

    def dfs(used: int, start: int, cur: int, closed: int) -> None:
        bi, bj = base_map[cur], base_map[start]
        if rem[bi][bj] > 0:
            rem[bi][bj] -= 1
            if used == full:
                coeffs[closed + 1] += 1
            else:
                nxt = ((used + 1) & ~used).bit_length() - 1
                dfs(used | (1 << nxt), nxt, nxt, closed + 1)
            rem[bi][bj] += 1
        for j in range(m):
            bit = 1 << j
            if not used & bit:
                bj2 = base_map[j]
                if rem[bi][bj2] > 0:
                    rem[bi][bj2] -= 1
                    dfs(used | bit, start, j, closed)
                    rem[bi][bj2] += 1

    dfs(1, 0, 0, 0)
    return AlphaPolynomial(coeffs)


def closed_form_coefficient(q: Sequence[int], n: Crossing) -> AlphaPolynomial:
    """Coefficient polynomial of a crossing class on a star-forest.

    Computed as rising(q_i) * q_i! over every vertex, divided by n_ii! over
    self-loops and rising(n_ij) * n_ij! over off-diagonal pairs.  Keeping the
    ratio in rising factorials makes it a genuine polynomial identity; the
    division is exact, and a nonzero remainder signals a crossing matrix
    outside the support set (or a graph that is not a star-forest).
    """
    d = len(n)
    q = check_block_spec(q, d)
    numerator = AlphaPolynomial.one()
    scale = Fraction(1)
    for i in range(d):
        numerator = numerator * AlphaPolynomial.rising(q[i])
        scale *= factorial_fraction(q[i])
    denominator = AlphaPolynomial.one()
    for i in range(d):
        scale /= factorial_fraction(n[i][i])
        for j in range(i + 1, d):
            if n[i][j] != n[j][i]:
                raise ConsistencyError(
                    "off-diagonal crossings must be symmetric on a star-forest"
                )
            if n[i][j]:
                denominator = denominator * AlphaPolynomial.rising(n[i][j])
                scale /= factorial_fraction(n[i][j])
    try:
        quotient = numerator.exact_div(denominator)
    except ConsistencyError as exc:
        raise ConsistencyError(
            "crossing coefficient is not polynomial; the crossing matrix is "
            "outside the support set or the graph is not a star-forest"
        ) from exc
    return quotient * scale


def entry_monomial(matrix: SquareMatrix, n: Crossing):
    """Product of entries raised to crossing powers, with 0**0 = 1."""
    out = Fraction(1) if matrix.mode == RATIONAL else 1.0
    for i in range(matrix.d):
        for j in range(matrix.d):
            k = n[i][j]
            if k:
                out *= matrix.entries[i][j] ** k
    return out


def per_alpha_starforest(matrix: SquareMatrix, q: Sequence[int]) -> AlphaPolynomial:
    """Closed-form block alpha-permanent for star-forest matrices.

    Runs in time polynomial in the block order and the size of the
    crossing-support set; no permutations are enumerated.
    """
    if matrix.mode != RATIONAL:
        raise StructureError("exact alpha-permanents require a rational-mode matrix")
    graph = graph_of_matrix(matrix)
    if not graph.is_star_forest:
        raise StructureError(
            "closed form requires a star-forest sparsity graph; "
            f"classification is {graph.classification!r}"
        )
    q = check_block_spec(q, matrix.d)
    total = AlphaPolynomial.zero()
    for n in tq_enumerate(graph, q):
        mono = entry_monomial(matrix, n)
        if mono != 0:
            total = total + closed_form_coefficient(q, n) * mono
    return total


def expansion_to_json(expansion: MonomialExpansion) -> list[dict]:
    return [
        {"crossing": [list(row) for row in key], "poly": poly.to_json()}
        for key, poly in sorted(expansion.items())
    ]

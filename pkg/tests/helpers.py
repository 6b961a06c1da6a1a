"""Independent oracles and corpus generators used across the test suite.

Oracles here are deliberately written against different algorithms than the
library: permanents via itertools.permutations with explicit cycle counting,
crossing supports via exhaustive filtering, nonzero-permanent detection via
bipartite matching.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations, product

from loopperm.graphs import InducedGraph
from loopperm.matrices import SquareMatrix


def cycle_count(pi) -> int:
    seen = [False] * len(pi)
    cycles = 0
    for i in range(len(pi)):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = pi[j]
    return cycles


def per_alpha_oracle(rows) -> list[Fraction]:
    """Coefficient list of the alpha-permanent by full permutation listing."""
    m = len(rows)
    coeffs = [Fraction(0)] * (m + 1)
    for pi in permutations(range(m)):
        prod = Fraction(1)
        for i in range(m):
            prod *= rows[i][pi[i]]
            if prod == 0:
                break
        if prod == 0:
            continue
        coeffs[cycle_count(pi)] += prod
    return coeffs


def classical_permanent_oracle(rows) -> Fraction:
    m = len(rows)
    total = Fraction(0)
    for pi in permutations(range(m)):
        prod = Fraction(1)
        for i in range(m):
            prod *= rows[i][pi[i]]
        total += prod
    return total


def tq_oracle(graph: InducedGraph, q) -> set:
    """Exhaustive filter over bounded integer matrices on the support."""
    d = graph.vertex_count
    support = [
        (i, j)
        for i in range(d)
        for j in range(d)
        if ((i, j) if i <= j else (j, i)) in graph.edges
    ]
    bound = max(q) if q else 0
    found = set()
    for values in product(range(bound + 1), repeat=len(support)):
        n = [[0] * d for _ in range(d)]
        for (i, j), v in zip(support, values):
            n[i][j] = v
        rows = [sum(r) for r in n]
        cols = [sum(n[i][j] for i in range(d)) for j in range(d)]
        if rows == cols == list(q):
            found.add(tuple(tuple(r) for r in n))
    return found


def has_nonzero_permutation(rows) -> bool:
    """Bipartite perfect matching on the nonzero pattern (augmenting paths)."""
    m = len(rows)
    adj = [[j for j in range(m) if rows[i][j] != 0] for i in range(m)]
    match_col = [-1] * m

    def augment(i, visited) -> bool:
        for j in adj[i]:
            if not visited[j]:
                visited[j] = True
                if match_col[j] == -1 or augment(match_col[j], visited):
                    match_col[j] = i
                    return True
        return False

    for i in range(m):
        if not augment(i, [False] * m):
            return False
    return True


def random_fraction(rng: random.Random, signed: bool = True) -> Fraction:
    f = Fraction(rng.randint(1, 5), rng.randint(1, 5))
    if signed and rng.random() < 0.3:
        f = -f
    return f


def random_star_forest_matrix(rng: random.Random, d: int,
                              self_loop_prob: float = 0.45,
                              one_sided_prob: float = 0.2) -> SquareMatrix:
    """Random rational matrix whose sparsity graph is a star-forest."""
    rows = [[Fraction(0)] * d for _ in range(d)]
    for v in range(1, d):
        if rng.random() < 0.75:
            parent = rng.randrange(v)
            rows[v][parent] = random_fraction(rng)
            if rng.random() >= one_sided_prob:
                rows[parent][v] = random_fraction(rng)
            elif rng.random() < 0.5:
                rows[v][parent], rows[parent][v] = Fraction(0), random_fraction(rng)
    for v in range(d):
        if rng.random() < self_loop_prob:
            rows[v][v] = random_fraction(rng)
    return SquareMatrix.rational(rows)


def random_block_spec(rng: random.Random, d: int, max_entry: int = 3,
                      max_total: int = 9) -> tuple[int, ...]:
    q = [rng.randint(0, max_entry) for _ in range(d)]
    while sum(q) > max_total:
        idx = rng.randrange(d)
        if q[idx] > 0:
            q[idx] -= 1
    return tuple(q)


def feasible_block_spec(rng: random.Random, graph: InducedGraph,
                        max_entry: int = 3, max_total: int = 9) -> tuple[int, ...]:
    """Row sums of a random crossing matrix on the graph, so the spec is
    realizable and the permanent is nonzero for generic entries."""
    d = graph.vertex_count
    for _ in range(40):
        q = [0] * d
        for i, j in graph.edges:
            if i == j:
                q[i] += rng.randint(0, 2)
            else:
                k = rng.randint(0, 2)
                q[i] += k
                q[j] += k
        if sum(q) <= max_total and all(x <= max_entry for x in q):
            return tuple(q)
    return tuple(0 for _ in range(d))


def random_positive_chain_rows(rng: random.Random, d: int) -> list[list[Fraction]]:
    """Strictly positive rows with row sums at most 1/2 (hence transient)."""
    return [
        [Fraction(rng.randint(1, 4), 8 * d) for _ in range(d)]
        for _ in range(d)
    ]


def all_labeled_forests(d: int):
    """Every acyclic simple graph on vertices 0..d-1, as edge tuples."""
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    out = []
    for mask in range(1 << len(pairs)):
        edges = [pairs[k] for k in range(len(pairs)) if mask >> k & 1]
        parent = list(range(d))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for i, j in edges:
            ri, rj = find(i), find(j)
            if ri == rj:
                ok = False
                break
            parent[rj] = ri
        if ok:
            out.append(tuple(edges))
    return out

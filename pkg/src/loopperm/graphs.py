"""Graphs induced by matrix sparsity, cycle-freeness classification, and
enumeration of crossing matrices with prescribed row sums.

The induced graph of a matrix A has an (undirected) edge {i, j} whenever
A[i][j] or A[j][i] is nonzero; {i, i} is a self-loop when the diagonal entry
is nonzero.  A graph whose only cycles are self-loops is called a star
forest here; dropping the self-loops as well gives a plain forest.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .errors import StructureError
from .matrices import BlockSpec, SquareMatrix, check_block_spec

FOREST = "forest"
STAR_FOREST = "star-forest"
GENERAL = "general"

Edge = tuple[int, int]
Crossing = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class InducedGraph:
    vertex_count: int
    edges: frozenset[Edge]
    classification: str

    @property
    def is_star_forest(self) -> bool:
        return self.classification in (FOREST, STAR_FOREST)

    @property
    def self_loop_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(i for i, j in self.edges if i == j))

    @property
    def skeleton_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted((i, j) for i, j in self.edges if i != j))

    def neighbors(self, v: int) -> tuple[int, ...]:
        out = set()
        for i, j in self.edges:
            if i == j:
                continue
            if i == v:
                out.add(j)
            elif j == v:
                out.add(i)
        return tuple(sorted(out))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        """Join the classes of a and b; False if they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def graph_of_matrix(matrix: SquareMatrix) -> InducedGraph:
    d = matrix.d
    edges: set[Edge] = set()
    for i in range(d):
        for j in range(i, d):
            if matrix.entries[i][j] != 0 or matrix.entries[j][i] != 0:
                edges.add((i, j))
    uf = _UnionFind(d)
    acyclic = True
    has_self_loop = False
    for i, j in sorted(edges):
        if i == j:
            has_self_loop = True
        elif not uf.union(i, j):
            acyclic = False
    if not acyclic:
        classification = GENERAL
    elif has_self_loop:
        classification = STAR_FOREST
    else:
        classification = FOREST
    return InducedGraph(vertex_count=d, edges=frozenset(edges), classification=classification)


def connected_components(graph: InducedGraph) -> list[tuple[int, ...]]:
    """Components under skeleton edges; isolated and self-looped-only vertices
    are singleton components."""
    uf = _UnionFind(graph.vertex_count)
    for i, j in graph.skeleton_edges:
        uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for v in range(graph.vertex_count):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(tuple(g) for g in groups.values())


# -- crossing matrices ------------------------------------------------------


def row_sums(n: Crossing) -> tuple[int, ...]:
    return tuple(sum(row) for row in n)


def col_sums(n: Crossing) -> tuple[int, ...]:
    return tuple(sum(row[j] for row in n) for j in range(len(n)))


def is_sourceless(n: Crossing) -> bool:
    return row_sums(n) == col_sums(n)


def crossing_in_tq(graph: InducedGraph, q: Sequence[int], n: Crossing) -> bool:
    """Membership test straight from the definition: support inside the edge
    set, sourceless, and row sums equal to q."""
    d = graph.vertex_count
    q = check_block_spec(q, d)
    for i in range(d):
        for j in range(d):
            if n[i][j] != 0:
                key = (i, j) if i <= j else (j, i)
                if key not in graph.edges:
                    return False
    return is_sourceless(n) and row_sums(n) == q


def tq_enumerate(graph: InducedGraph, q: Sequence[int]) -> list[Crossing]:
    """All crossing matrices supported on the graph with row sums q.

    Requires a star-forest.  On the tree skeleton the off-diagonal entries
    are forced by leaf stripping once the diagonal split at each self-looped
    vertex is fixed, so the enumeration runs over those splits only
    (lexicographically, for deterministic output) and keeps the splits whose
    forced solution is nonnegative and consistent.  A plain forest has no
    splits, hence at most one result.
    """
    if not graph.is_star_forest:
        raise StructureError("crossing-support enumeration needs a star-forest graph")
    d = graph.vertex_count
    q = check_block_spec(q, d)
    loops = graph.self_loop_vertices
    results: list[Crossing] = []
    for split in product(*(range(q[v] + 1) for v in loops)):
        diag = {v: s for v, s in zip(loops, split)}
        solved = _solve_forest(graph, q, diag)
        if solved is not None:
            results.append(solved)
    return results


def _solve_forest(graph: InducedGraph, q: BlockSpec, diag: dict[int, int]) -> Crossing | None:
    d = graph.vertex_count
    residual = [q[v] - diag.get(v, 0) for v in range(d)]
    if any(r < 0 for r in residual):
        return None
    adj: dict[int, set[int]] = {v: set() for v in range(d)}
    for i, j in graph.skeleton_edges:
        adj[i].add(j)
        adj[j].add(i)
    n = [[0] * d for _ in range(d)]
    for v, s in diag.items():
        n[v][v] = s
    alive = set(range(d))
    # Strip degree-<=1 vertices in index order until none remain.
    while alive:
        leaf = None
        for v in sorted(alive):
            if len(adj[v]) <= 1:
                leaf = v
                break
        if leaf is None:  # cycle in skeleton; cannot happen on a star-forest
            raise StructureError("skeleton contains a cycle")
        if not adj[leaf]:
            if residual[leaf] != 0:
                return None
            alive.remove(leaf)
            continue
        parent = next(iter(adj[leaf]))
        k = residual[leaf]
        n[leaf][parent] = k
        n[parent][leaf] = k
        residual[parent] -= k
        if residual[parent] < 0:
            return None
        residual[leaf] = 0
        adj[parent].remove(leaf)
        adj[leaf].clear()
        alive.remove(leaf)
    return tuple(tuple(row) for row in n)


def crossing_to_json(n: Crossing) -> list[list[int]]:
    return [list(row) for row in n]


def crossing_from_json(data: Iterable[Iterable[int]]) -> Crossing:
    return tuple(tuple(int(x) for x in row) for row in data)

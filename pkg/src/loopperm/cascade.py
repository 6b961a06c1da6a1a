"""Exact occupation-field sampling on star-forest chains, without loops.

On a tree rooted where all killing sits, the edge crossing counts form a
branching cascade: the root's crossings into its children are negative
multinomial with shape alpha, and each vertex, given m crossings to its
parent, sends negative multinomial(m + alpha) crossings to its children.
A general star-forest chain is reduced to that case per connected
component: self-loops are expanded through copy vertices, the killing is
concentrated at the component root by the harmonic transform (which leaves
the loop ensemble's law untouched), the cascade runs on the resulting tree,
and the crossings are projected back.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import numpy as np

from .chains import StarExpansion, SubMarkovChain, h_transform, star_expand, restricted_chain
from .distributions import nm_sample, nm_sample_many
from .errors import DomainError, StructureError
from .graphs import FOREST, connected_components
from .matrices import RATIONAL
from .rng import chunk_ranges, substream
from .soup import OccupationFields, SoupStats, _check_alpha, _zero_keys

KILLING_TOL = 1e-9


@dataclass(frozen=True)
class _TreePlan:
    """BFS order and child lists of a rooted tree chain."""

    root: int
    order: tuple[int, ...]
    parent: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    child_probs: tuple[tuple[float, ...], ...]


def _plan_tree(chain: SubMarkovChain, root: int) -> _TreePlan:
    graph = chain.graph()
    if graph.classification != FOREST:
        raise StructureError("cascade trees must have no self-loops")
    comps = connected_components(graph)
    if len(comps) != 1:
        raise StructureError("cascade trees must be connected")
    if not 0 <= root < chain.d:
        raise DomainError("root vertex out of range")
    for x in range(chain.d):
        if x == root:
            continue
        k = chain.killing[x]
        bad = (k != 0) if chain.mode == RATIONAL else abs(float(k)) > KILLING_TOL
        if bad:
            raise StructureError("cascade requires killing concentrated at the root")
    rows = chain.to_float_rows()
    parent = [-1] * chain.d
    order = [root]
    children: list[tuple[int, ...]] = [()] * chain.d
    seen = {root}
    frontier = [root]
    while frontier:
        nxt: list[int] = []
        for x in frontier:
            kids = tuple(y for y in graph.neighbors(x) if y not in seen)
            children[x] = kids
            for y in kids:
                parent[y] = x
                seen.add(y)
                order.append(y)
                nxt.append(y)
        frontier = nxt
    probs = tuple(tuple(rows[x][y] for y in children[x]) for x in range(chain.d))
    return _TreePlan(root=root, order=tuple(order), parent=tuple(parent),
                     children=tuple(children), child_probs=probs)


def cascade_sample_tree(chain: SubMarkovChain, alpha: float, root: int,
                        rng: np.random.Generator) -> OccupationFields:
    """One exact draw of (theta, crossings) for a tree chain killed at the root."""
    _check_alpha(alpha)
    plan = _plan_tree(chain, root)
    d = chain.d
    cross = [[0] * d for _ in range(d)]
    up = [0] * d  # crossings to the parent
    for x in plan.order:
        kids = plan.children[x]
        if not kids:
            continue
        shape = float(alpha) if x == root else up[x] + float(alpha)
        counts = nm_sample(shape, plan.child_probs[x], rng)
        for y, c in zip(kids, counts):
            cross[x][y] = c
            cross[y][x] = c
            up[y] = c
    theta = tuple(sum(row) for row in cross)
    return OccupationFields(theta=theta, crossings=tuple(tuple(r) for r in cross))


@dataclass(frozen=True)
class _ComponentPlan:
    vertices: tuple[int, ...]        # base vertices, sorted
    tree_chain: SubMarkovChain       # star-expanded + harmonically transformed
    expansion: StarExpansion
    plan: _TreePlan
    edge_targets: tuple[tuple[int, int], ...]  # base (i, j) pair per tree edge


def _plan_components(chain: SubMarkovChain, root: int | None) -> list[_ComponentPlan]:
    graph = chain.graph()
    if not graph.is_star_forest:
        raise StructureError("cascade sampling requires a star-forest chain")
    if root is not None and not 0 <= root < chain.d:
        raise DomainError("root vertex out of range")
    plans = []
    for comp in connected_components(graph):
        sub = restricted_chain(chain, comp)
        local_root = 0
        if root is not None and root in comp:
            local_root = comp.index(root)
        star_chain, expansion = star_expand(sub)
        tree_chain, _ = h_transform(star_chain, local_root)
        plan = _plan_tree(tree_chain, local_root)
        targets = []
        for x in plan.order:
            for y in plan.children[x]:
                bi = comp[expansion.base_of[x]]
                bj = comp[expansion.base_of[y]]
                targets.append((bi, bj))
        plans.append(_ComponentPlan(vertices=tuple(comp), tree_chain=tree_chain,
                                    expansion=expansion, plan=plan,
                                    edge_targets=tuple(targets)))
    return plans


def cascade_sample_general(chain: SubMarkovChain, alpha: float,
                           rng: np.random.Generator,
                           root: int | None = None) -> OccupationFields:
    """One exact draw of (theta, crossings) for any star-forest chain.

    Components are handled independently, each rooted at its minimal vertex
    (or at ``root`` for the component containing it).
    """
    _check_alpha(alpha)
    d = chain.d
    cross = [[0] * d for _ in range(d)]
    for comp_plan in _plan_components(chain, root):
        fields = cascade_sample_tree(comp_plan.tree_chain, alpha,
                                     comp_plan.plan.root, rng)
        star_cross = comp_plan.expansion.project_crossing(fields.crossings)
        for li, bi in enumerate(comp_plan.vertices):
            for lj, bj in enumerate(comp_plan.vertices):
                cross[bi][bj] += star_cross[li][lj]
    theta = tuple(sum(row) for row in cross)
    return OccupationFields(theta=theta, crossings=tuple(tuple(r) for r in cross))


def _cascade_chunk(chain: SubMarkovChain, alpha: float, seed: int, chunk: int,
                   n_replicas: int, root: int | None) -> SoupStats:
    rng = substream(seed, chunk)
    d = chain.d
    plans = _plan_components(chain, root)
    columns: list[tuple[int, int]] = []
    arrays: list[np.ndarray] = []
    for comp_plan in plans:
        plan = comp_plan.plan
        values: dict[tuple[int, int], np.ndarray] = {}
        up: dict[int, np.ndarray] = {}
        for x in plan.order:
            kids = plan.children[x]
            if not kids:
                continue
            if x == plan.root:
                shapes = np.full(n_replicas, float(alpha))
            else:
                shapes = up[x] + float(alpha)
            counts = nm_sample_many(shapes, plan.child_probs[x], rng)
            for pos, y in enumerate(kids):
                col = counts[:, pos]
                values[(x, y)] = col
                up[y] = col
        idx = 0
        for x in plan.order:
            for y in plan.children[x]:
                columns.append(comp_plan.edge_targets[idx])
                arrays.append(values[(x, y)])
                idx += 1
    stats = SoupStats(vertex_count=d)
    stats.total = n_replicas
    zero_theta, zero_cross = _zero_keys(d)
    if not arrays:
        stats.theta[zero_theta] += n_replicas
        stats.crossings[zero_cross] += n_replicas
        stats.empty += n_replicas
        return stats
    table = np.stack(arrays, axis=1)
    uniq, counts = np.unique(table, axis=0, return_counts=True)
    for row, howmany in zip(uniq, counts):
        cross = [[0] * d for _ in range(d)]
        for (bi, bj), val in zip(columns, row):
            v = int(val)
            if bi == bj:
                cross[bi][bi] = v
            else:
                cross[bi][bj] = v
                cross[bj][bi] = v
        key = tuple(tuple(r) for r in cross)
        theta = tuple(sum(r) for r in cross)
        stats.crossings[key] += int(howmany)
        stats.theta[theta] += int(howmany)
        if not any(row):
            stats.empty += int(howmany)
    return stats


def _cascade_chunk_star(args) -> SoupStats:
    return _cascade_chunk(*args)


def collect_cascade_stats(chain: SubMarkovChain, alpha: float, seed: int, count: int,
                          workers: int = 1, root: int | None = None) -> SoupStats:
    """Occupation-field statistics over ``count`` cascade draws.

    Matches the soup sampler's chunked determinism contract: results depend
    on (seed, count) only, not on the worker count.
    """
    _check_alpha(alpha)
    if count < 0:
        raise DomainError("sample count must be nonnegative")
    jobs = [(chain, float(alpha), int(seed), chunk, stop - start, root)
            for chunk, start, stop in chunk_ranges(count)]
    stats = SoupStats(vertex_count=chain.d)
    if workers <= 1 or len(jobs) <= 1:
        for job in jobs:
            stats.merge(_cascade_chunk_star(job))
        return stats
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_cascade_chunk_star, jobs, chunksize=4):
            stats.merge(part)
    return stats

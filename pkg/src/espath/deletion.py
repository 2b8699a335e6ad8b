"""Vertex deletion sets: feedback vertex set (residual forest),
disjoint-paths deletion set (residual linear forest), split vertex
deletion set (residual split graph).

Exact bounded-depth branching on obstructions, sized for desk-scale
inputs; every returned set is re-checked by the explicit verifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .graph import (
    Graph,
    GraphError,
    connected_components,
    induced_subgraph,
)

KINDS = ("FVS", "DPD", "SVD")


@dataclass(frozen=True)
class DeletionSet:
    kind: str
    vertices: frozenset[int]
    verified: bool = False


def _is_forest(g: Graph) -> bool:
    return g.m == g.n - len(connected_components(g))


def _is_linear_forest(g: Graph) -> bool:
    """Disjoint union of paths: acyclic with maximum degree <= 2."""
    if any(g.degree(v) > 2 for v in range(g.n)):
        return False
    return _is_forest(g)


def split_bipartition(g: Graph) -> tuple[frozenset[int], frozenset[int]]:
    """A (clique, independent set) partition of a split graph.

    Uses the degree-sequence characterization: with degrees sorted
    non-increasingly, let m be the largest index with d_m >= m-1; the
    graph is split iff sum(d_1..d_m) == m(m-1) + sum(d_(m+1)..d_n), and
    then the m highest-degree vertices are a valid clique side. Ties are
    broken by ascending vertex id, and the partition is re-checked
    directly so a bad tie-break could never slip through.

    Raises GraphError when g is not split.
    """
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    degs = [g.degree(v) for v in order]
    m = 0
    for i in range(1, g.n + 1):
        if degs[i - 1] >= i - 1:
            m = i
    if sum(degs[:m]) != m * (m - 1) + sum(degs[m:]):
        raise GraphError("not a split graph")
    clique = frozenset(order[:m])
    indep = frozenset(order[m:])
    for u, v in combinations(sorted(clique), 2):
        if not g.has_edge(u, v):
            raise GraphError("split partition check failed: clique side")
    for u, v in combinations(sorted(indep), 2):
        if g.has_edge(u, v):
            raise GraphError("split partition check failed: independent side")
    return clique, indep


def is_split(g: Graph) -> bool:
    try:
        split_bipartition(g)
    except GraphError:
        return False
    return True


def verify_deletion_set(g: Graph, ds: DeletionSet) -> bool:
    """True iff G - ds.vertices has the shape ds.kind declares."""
    if ds.kind not in KINDS:
        raise GraphError(f"unknown deletion-set kind {ds.kind!r}")
    for v in ds.vertices:
        if not (0 <= v < g.n):
            raise GraphError(f"deletion-set vertex {v} out of range")
    residual, _ = induced_subgraph(g, set(range(g.n)) - set(ds.vertices))
    if ds.kind == "FVS":
        return _is_forest(residual)
    if ds.kind == "DPD":
        return _is_linear_forest(residual)
    return is_split(residual)


def _shortest_cycle(g: Graph) -> Optional[tuple[int, ...]]:
    """Vertex tuple of a shortest cycle, or None in an acyclic graph.

    For each edge (u,v) in sorted order, the shortest u-v path avoiding
    that edge closes a shortest cycle through it; the overall minimum is
    a shortest cycle of the graph. First strict minimum wins, so the
    result is deterministic.
    """
    best: Optional[tuple[int, ...]] = None
    for u, v in g.edges():
        prev = {u: -1}
        queue = [u]
        while queue and v not in prev:
            nxt = []
            for x in queue:
                for w in g.adj[x]:
                    if w in prev or (x == u and w == v):
                        continue
                    prev[w] = x
                    nxt.append(w)
            queue = nxt
        if v not in prev:
            continue
        path = [v]
        while path[-1] != u:
            path.append(prev[path[-1]])
        cycle = tuple(reversed(path))
        if best is None or len(cycle) < len(best):
            best = cycle
    return best


def _smallest_split_obstruction(g: Graph) -> Optional[tuple[int, ...]]:
    """Lexicographically smallest induced 2K2 or C4, else smallest C5.

    Split graphs are exactly the {2K2, C4, C5}-free graphs, so any
    deletion set must hit every such induced subgraph.
    """
    for quad in combinations(range(g.n), 4):
        edges = [(a, b) for a, b in combinations(quad, 2) if g.has_edge(a, b)]
        if len(edges) == 2:
            (a, b), (c, d) = edges
            if len({a, b, c, d}) == 4:  # perfect matching: induced 2K2
                return quad
        elif len(edges) == 4:
            if all(sum(1 for e in edges if x in e) == 2 for x in quad):
                return quad  # 2-regular on 4 vertices: induced C4
    for five in combinations(range(g.n), 5):
        edges = [(a, b) for a, b in combinations(five, 2) if g.has_edge(a, b)]
        if len(edges) == 5 and all(
            sum(1 for e in edges if x in e) == 2 for x in five
        ):
            return five  # 2-regular on 5 vertices is a single 5-cycle
    return None


def _obstruction(g: Graph, kind: str) -> Optional[tuple[int, ...]]:
    """A vertex set every deletion set of this kind must intersect."""
    if kind == "SVD":
        return _smallest_split_obstruction(g)
    cyc = _shortest_cycle(g)
    if kind == "FVS":
        return cyc
    star: Optional[tuple[int, ...]] = None
    for v in range(g.n):
        if g.degree(v) >= 3:
            star = (v, *g.adj[v])
            break
    if cyc is None:
        return star
    if star is None or len(cyc) <= len(star):
        return cyc
    return star


def _branch(g: Graph, kind: str, chosen: set[int], budget: int) -> Optional[frozenset[int]]:
    residual, idmap = induced_subgraph(g, set(range(g.n)) - chosen)
    obs = _obstruction(residual, kind)
    if obs is None:
        return frozenset(chosen)
    if budget == 0:
        return None
    for v in sorted(idmap.to_old(obs)):
        chosen.add(v)
        found = _branch(g, kind, chosen, budget - 1)
        chosen.discard(v)
        if found is not None:
            return found
    return None


def find_deletion_set(g: Graph, kind: str, kmax: int) -> Optional[DeletionSet]:
    """Smallest deletion set of the given kind with size <= kmax, or None.

    Iterative deepening over the target size keeps the first answer
    minimum; within a size the branching explores obstructions smallest
    first with vertex ids ascending, so the result is deterministic.
    """
    if kind not in KINDS:
        raise GraphError(f"unknown deletion-set kind {kind!r}")
    for k in range(max(kmax, 0) + 1):
        found = _branch(g, kind, set(), k)
        if found is not None:
            ds = DeletionSet(kind, found, verified=False)
            if not verify_deletion_set(g, ds):
                raise GraphError("internal error: found set failed verification")
            return DeletionSet(kind, found, verified=True)
    return None

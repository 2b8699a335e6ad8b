"""Undirected graph representation, distances, and path predicates.

Vertices are the integers 0..n-1. Graphs are simple (no loops, no parallel
edges) and unweighted. A dense distance matrix is the canonical distance
store; INF marks disconnection and is strictly larger than any achievable
hop count.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

INF = 1 << 30


class GraphError(ValueError):
    pass


class Graph:
    """Immutable simple undirected graph with sorted adjacency lists."""

    __slots__ = ("n", "adj", "_edge_set")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise GraphError("negative vertex count")
        adj: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        for row in adj:
            row.sort()
        self.n = n
        self.adj = adj
        self._edge_set = seen

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self._edge_set)

    @property
    def m(self) -> int:
        return len(self._edge_set)

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self._edge_set

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Graph(n={self.n}, m={self.m})"


def bfs_distances(g: Graph, src: int, blocked: frozenset[int] | set[int] = frozenset()) -> list[int]:
    """Hop distances from src; INF where unreachable.

    `blocked` vertices are treated as deleted (the source itself is never
    blocked). Used both for plain BFS and for the restricted distances d'
    computed in G - (S \\ {a,b}).
    """
    if not (0 <= src < g.n):
        raise GraphError(f"source {src} out of range")
    dist = [INF] * g.n
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for w in g.adj[u]:
            if dist[w] == INF and w not in blocked:
                dist[w] = du
                q.append(w)
    return dist


class DistanceMatrix:
    """n x n table of hop counts (symmetric, zero diagonal, INF = disconnected)."""

    __slots__ = ("n", "dist")

    def __init__(self, dist: list[list[int]]):
        self.n = len(dist)
        self.dist = dist

    def __getitem__(self, uv: tuple[int, int]) -> int:
        return self.dist[uv[0]][uv[1]]

    def row(self, u: int) -> list[int]:
        return self.dist[u]

    def eccentricity(self, u: int) -> int:
        return max(self.dist[u])

    def diameter(self) -> int:
        return max(max(row) for row in self.dist) if self.n else 0

    def radius(self) -> int:
        return min(max(row) for row in self.dist) if self.n else 0


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    return DistanceMatrix([bfs_distances(g, s) for s in range(g.n)])


def is_valid_path(g: Graph, p: Sequence[int]) -> bool:
    """Consecutive vertices adjacent, all vertices distinct, nonempty."""
    if len(p) == 0:
        return False
    if len(set(p)) != len(p):
        return False
    if any(not (0 <= v < g.n) for v in p):
        return False
    return all(g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1))


def is_shortest_path(g: Graph, p: Sequence[int], dm: DistanceMatrix | None = None) -> bool:
    if not is_valid_path(g, p):
        raise GraphError(f"not a valid path: {list(p)}")
    if dm is not None:
        return len(p) - 1 == dm[p[0], p[-1]]
    return len(p) - 1 == bfs_distances(g, p[0])[p[-1]]


def dist_to_path(dm: DistanceMatrix, v: int, p: Sequence[int]) -> int:
    return min(dm[v, u] for u in p)


def path_eccentricity(g: Graph, p: Sequence[int], dm: DistanceMatrix | None = None) -> int:
    """max over vertices v of d_G(v, P); error on disconnected graphs."""
    if not is_valid_path(g, p):
        raise GraphError(f"not a valid path: {list(p)}")
    if dm is None:
        dm = all_pairs_distances(g)
    ecc = 0
    for v in range(g.n):
        d = dist_to_path(dm, v, p)
        if d >= INF:
            raise GraphError("infinite eccentricity: graph is disconnected")
        if d > ecc:
            ecc = d
    return ecc


def covers(g: Graph, p: Sequence[int], v: int, ell: int, dm: DistanceMatrix | None = None) -> bool:
    if dm is None:
        dm = all_pairs_distances(g)
    return dist_to_path(dm, v, p) <= ell


def connected_components(g: Graph, removed: frozenset[int] | set[int] = frozenset()) -> list[list[int]]:
    """Components of G - removed, each sorted, listed by smallest vertex."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s] or s in removed:
            continue
        comp = []
        stack = [s]
        seen[s] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in g.adj[u]:
                if not seen[w] and w not in removed:
                    seen[w] = True
                    stack.append(w)
        comp.sort()
        comps.append(comp)
    return comps


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return len(connected_components(g)) == 1


class IdMap:
    """Stable old-id <-> new-id mapping for subgraph extraction."""

    __slots__ = ("old_of_new", "new_of_old")

    def __init__(self, kept: Sequence[int]):
        self.old_of_new = list(kept)
        self.new_of_old = {old: new for new, old in enumerate(kept)}

    def to_old(self, p: Iterable[int]) -> list[int]:
        return [self.old_of_new[v] for v in p]

    def to_new(self, p: Iterable[int]) -> list[int]:
        return [self.new_of_old[v] for v in p]


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, IdMap]:
    kept = sorted(set(keep))
    idmap = IdMap(kept)
    edges = [
        (idmap.new_of_old[u], idmap.new_of_old[v])
        for u, v in g.edges()
        if u in idmap.new_of_old and v in idmap.new_of_old
    ]
    return Graph(len(kept), edges), idmap


def parse_edge_list(text: str) -> Graph:
    """Parse the "n m" header + "u v" lines format. '#' comments and blank
    lines are ignored."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise GraphError("empty edge-list input")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError(f"expected 'n m' header, got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphError(f"bad header {lines[0]!r}") from exc
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"expected 'u v' edge line, got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if len(edges) != m:
        raise GraphError(f"header promises {m} edges, found {len(edges)}")
    return Graph(n, edges)


def format_edge_list(g: Graph) -> str:
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


# Small constructors used all over the tests.

def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with the center at vertex 0."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])

"""Hard-instance generator: Dominating Set -> eccentricity shortest path.

Given (G, k), builds a host graph H whose structure forces any low-eccentricity
shortest path to select one "representative" vertex per layer; the selected
originals then dominate G. Concretely: G has a dominating set of size <= k
iff H has a shortest path of eccentricity <= k+1. Deleting the k+1 connector
vertices X (the inter-layer hubs plus the two path ends a, b) leaves a chordal
graph, so these instances exercise solvers parameterized by chordal deletion.

Layout is deterministic: the original clique first, then the k representative
layers row-major, then hubs z, then s/a/b/t, the two end paths, and finally the
ladder blocks sorted by (layer, origin, target, position). Two calls with the
same input produce byte-identical edge lists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import (
    DistanceMatrix,
    Graph,
    all_pairs_distances,
    is_shortest_path,
    is_valid_path,
    path_eccentricity,
)
from .oracle import OracleBudgetError, esp_decide_oracle

DEFAULT_CANDIDATE_BUDGET = 1 << 20
DEFAULT_ORACLE_FALLBACK_BUDGET = 1 << 22


class CandidateBudgetError(RuntimeError):
    """Raised when the targeted candidate space n^k is too large to sweep."""


@dataclass(frozen=True)
class HardInstance:
    h: Graph
    x: frozenset[int]          # chordal deletion set: hubs + {a, b}
    k_prime: int               # = k + 1
    labels: dict[int, str]     # vertex id -> role tag


class _Layout:
    """Deterministic vertex-id arithmetic for the host graph of (g, k)."""

    def __init__(self, g: Graph, k: int):
        self.n = g.n
        self.k = k
        self.closed = [sorted(set(g.adj[j]) | {j}) for j in range(g.n)]
        self.z_base = g.n + k * g.n
        self.s = self.z_base + (k - 1)
        self.a = self.s + 1
        self.b = self.s + 2
        self.t = self.s + 3
        self.a_base = self.s + 4
        self.b_base = self.a_base + k
        w_base = self.b_base + k
        self.w_start: dict[tuple[int, int, int], int] = {}
        off = w_base
        for i in range(1, k + 1):
            for j in range(g.n):
                for tt in self.closed[j]:
                    self.w_start[(i, j, tt)] = off
                    off += k
        self.total = off

    def vstar(self, j: int) -> int:
        return j

    def u(self, i: int, j: int) -> int:
        return self.n + (i - 1) * self.n + j

    def z(self, i: int) -> int:
        return self.z_base + (i - 1)

    def apath(self, i: int) -> int:
        return self.a_base + (i - 1)

    def bpath(self, i: int) -> int:
        return self.b_base + (i - 1)

    def w(self, i: int, j: int, tt: int, p: int) -> int:
        return self.w_start[(i, j, tt)] + (p - 1)


def hard_vertex_count(g: Graph, k: int) -> int:
    """Closed-form size of the host graph: n + kn + (k-1) + 4 + 2k + k^2 * sum_j |N[v_j]|."""
    nbhd_sum = sum(g.degree(j) + 1 for j in range(g.n))
    return g.n + k * g.n + (k - 1) + 4 + 2 * k + k * k * nbhd_sum


def generate_hard_instance(g: Graph, k: int) -> HardInstance:
    if k < 1:
        raise ValueError("k must be >= 1")
    lay = _Layout(g, k)
    n = g.n
    edges: set[tuple[int, int]] = set()

    def add(u: int, v: int) -> None:
        edges.add((u, v) if u < v else (v, u))

    # originals form a clique
    for x in range(n):
        for y in range(x + 1, n):
            add(x, y)
    # hubs join consecutive representative layers
    for i in range(1, k):
        for j in range(n):
            add(lay.z(i), lay.u(i, j))
            add(lay.z(i), lay.u(i + 1, j))
    # the two end paths s..a and t..b, each of length k+1
    add(lay.s, lay.apath(1))
    add(lay.t, lay.bpath(1))
    for i in range(1, k):
        add(lay.apath(i), lay.apath(i + 1))
        add(lay.bpath(i), lay.bpath(i + 1))
    add(lay.apath(k), lay.a)
    add(lay.bpath(k), lay.b)
    # a feeds the first layer, b drains the last
    for j in range(n):
        add(lay.a, lay.u(1, j))
        add(lay.b, lay.u(k, j))
    # a length-(k+1) rail from each representative to every dominated original
    for i in range(1, k + 1):
        for j in range(n):
            for tt in lay.closed[j]:
                add(lay.u(i, j), lay.w(i, j, tt, 1))
                for p in range(1, k):
                    add(lay.w(i, j, tt, p), lay.w(i, j, tt, p + 1))
                add(lay.w(i, j, tt, k), lay.vstar(tt))
    # ladder rungs and diagonals between rails sharing a representative,
    # applied for both orders of each rail pair so the union is symmetric
    for i in range(1, k + 1):
        for j in range(n):
            for tt, ts in itertools.permutations(lay.closed[j], 2):
                for p in range(1, k + 1):
                    add(lay.w(i, j, tt, p), lay.w(i, j, ts, p))
                for q in range(1, k):
                    add(lay.w(i, j, tt, q), lay.w(i, j, ts, q + 1))
                add(lay.w(i, j, tt, k), lay.vstar(ts))

    labels: dict[int, str] = {}
    for j in range(n):
        labels[lay.vstar(j)] = f"V*[{j}]"
    for i in range(1, k + 1):
        for j in range(n):
            labels[lay.u(i, j)] = f"U[{i}][{j}]"
    for i in range(1, k):
        labels[lay.z(i)] = f"z[{i}]"
    labels[lay.s] = "s"
    labels[lay.a] = "a"
    labels[lay.b] = "b"
    labels[lay.t] = "t"
    for i in range(1, k + 1):
        labels[lay.apath(i)] = f"A[{i}]"
        labels[lay.bpath(i)] = f"B[{i}]"
    for (i, j, tt), start in lay.w_start.items():
        for p in range(1, k + 1):
            labels[start + p - 1] = f"W[{i}][{j}][{tt}][{p}]"

    h = Graph(lay.total, sorted(edges))
    x = frozenset(lay.z(i) for i in range(1, k)) | {lay.a, lay.b}
    return HardInstance(h=h, x=x, k_prime=k + 1, labels=labels)


def dominating_set_brute(g: Graph, k: int) -> Optional[frozenset[int]]:
    """Smallest dominating set of size <= k, or None. Subset enumeration."""
    closed = [set(g.adj[v]) | {v} for v in range(g.n)]
    for size in range(0, min(k, g.n) + 1):
        for combo in itertools.combinations(range(g.n), size):
            chosen = set(combo)
            if all(closed[v] & chosen for v in range(g.n)):
                return frozenset(combo)
    return None


def targeted_esp_check(g: Graph, k: int, hi: HardInstance | None = None,
                       dm: DistanceMatrix | None = None,
                       budget: int = DEFAULT_CANDIDATE_BUDGET) -> bool:
    """Scan the n^k structured candidates a, u[1][t1], z[1], ..., u[k][tk], b.

    A low-eccentricity shortest path in the host graph exists iff one of this
    shape does, so the scan decides the instance without a full path sweep.
    """
    if g.n == 0:
        return False
    if g.n ** k > budget:
        raise CandidateBudgetError(f"{g.n}^{k} candidates exceed budget {budget}")
    lay = _Layout(g, k)
    if hi is None:
        hi = generate_hard_instance(g, k)
    if dm is None:
        dm = all_pairs_distances(hi.h)
    for combo in itertools.product(range(g.n), repeat=k):
        path = [lay.a]
        for i, tj in enumerate(combo, start=1):
            path.append(lay.u(i, tj))
            if i < k:
                path.append(lay.z(i))
        path.append(lay.b)
        if not is_valid_path(hi.h, path):
            continue
        if not is_shortest_path(hi.h, path, dm):
            continue
        if path_eccentricity(hi.h, path, dm) <= k + 1:
            return True
    return False


def verify_reduction(g: Graph, k: int, hi: HardInstance,
                     candidate_budget: int = DEFAULT_CANDIDATE_BUDGET,
                     oracle_budget: int = DEFAULT_ORACLE_FALLBACK_BUDGET) -> bool:
    """Check both sides of the equivalence on one instance.

    The dominating-set side is decided by brute enumeration; the path side by
    the structured candidate scan, upgraded to the exhaustive oracle whenever
    the host graph is small enough for it.
    """
    ds_side = dominating_set_brute(g, k) is not None
    dm = all_pairs_distances(hi.h)
    esp_side = targeted_esp_check(g, k, hi, dm=dm, budget=candidate_budget)
    try:
        esp_side = esp_decide_oracle(hi.h, k + 1, budget=oracle_budget, dm=dm).feasible
    except OracleBudgetError:
        pass
    return ds_side == esp_side


def is_chordal(g: Graph) -> bool:
    """Maximum-cardinality search + perfect-elimination check."""
    n = g.n
    if n == 0:
        return True
    weight = [0] * n
    visited = [False] * n
    visit_order = []
    for _ in range(n):
        v = max((x for x in range(n) if not visited[x]),
                key=lambda x: (weight[x], -x))
        visited[v] = True
        visit_order.append(v)
        for w in g.adj[v]:
            if not visited[w]:
                weight[w] += 1
    elim = list(reversed(visit_order))
    pos = {v: i for i, v in enumerate(elim)}
    nbr = [set(g.adj[v]) for v in range(n)]
    for v in elim:
        later = [u for u in g.adj[v] if pos[u] > pos[v]]
        if not later:
            continue
        u0 = min(later, key=lambda u: pos[u])
        if any(u != u0 and u not in nbr[u0] for u in later):
            return False
    return True

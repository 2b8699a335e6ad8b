"""Shared generators for the test suite: small-graph enumeration and seeded
random instances."""

from __future__ import annotations

import itertools
import random

from espath.graph import Graph, connected_components, is_connected


def all_graphs(n: int):
    """Every labeled simple graph on n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def all_connected_graphs(n: int):
    for g in all_graphs(n):
        if is_connected(g):
            yield g


def random_connected_graph(rng: random.Random, n: int, p: float) -> Graph:
    """Connected G(n, p) by rejection; falls back to adding a random spanning
    tree when the bare sample is disconnected."""
    while True:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        g = Graph(n, edges)
        if is_connected(g):
            return g
        # wire components together along a random permutation, then retry edges
        perm = list(range(n))
        rng.shuffle(perm)
        extra = set(edges)
        for i in range(n - 1):
            a, b = perm[i], perm[i + 1]
            extra.add((min(a, b), max(a, b)))
        g = Graph(n, sorted(extra))
        if is_connected(g):
            return g


def random_tree(rng: random.Random, n: int) -> Graph:
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    return Graph(n, edges)


def brute_fvs(g, max_size=None):
    """Smallest vertex set whose removal leaves a forest (ties: first in
    combination order), or None if none exists within max_size."""
    if max_size is None:
        max_size = g.n
    for size in range(max_size + 1):
        for cand in itertools.combinations(range(g.n), size):
            s = set(cand)
            forest = True
            for comp in connected_components(g, removed=s):
                cset = set(comp)
                inner = sum(1 for u in comp for w in g.adj[u] if w in cset) // 2
                if inner != len(comp) - 1:
                    forest = False
                    break
            if forest:
                return list(cand)
    return None


def random_forest(rng: random.Random, n: int, start_prob: float = 0.18) -> Graph:
    """Random labeled forest: each vertex either starts a new tree or hangs
    off a random earlier vertex."""
    edges = []
    for v in range(1, n):
        if rng.random() >= start_prob:
            edges.append((rng.randrange(v), v))
    return Graph(n, edges)


def forest_path(g: Graph, u: int, w: int):
    """The unique u-w path in a forest, or None if separated."""
    from collections import deque

    parent = {u: None}
    dq = deque([u])
    while dq:
        x = dq.popleft()
        if x == w:
            out = []
            while x is not None:
                out.append(x)
                x = parent[x]
            return tuple(reversed(out))
        for y in g.adj[x]:
            if y not in parent:
                parent[y] = x
                dq.append(y)
    return None


def random_cpc_instance(rng: random.Random, n_max: int = 14, t_max: int = 3,
                        ell_max: int = 4, fam_max: int = 4):
    """Seeded random path-cover instance satisfying all structural
    invariants (disjoint families, one tree each, no cross-family touch)."""
    from espath.cpc import CpcInstance, FeasibleFamily

    n = rng.randint(1, n_max)
    g = random_forest(rng, n)
    ell = rng.randint(0, ell_max)
    want = rng.randint(0, t_max)
    used = set()  # vertices of already placed families
    blocked = set()  # used plus their neighbors
    fams = []
    for _ in range(40):
        if len(fams) == want:
            break
        u = rng.randrange(n)
        w = rng.randrange(n)
        seed = forest_path(g, u, w)
        if seed is None or any(v in blocked for v in seed):
            continue
        subs = set()
        for _ in range(rng.randint(1, fam_max)):
            i = rng.randrange(len(seed))
            j = rng.randrange(len(seed))
            i, j = min(i, j), max(i, j)
            subs.add(seed[i:j + 1])
        paths = sorted(subs)
        fams.append(FeasibleFamily(paths))
        for p in paths:
            for v in p:
                used.add(v)
                blocked.add(v)
                blocked.update(g.adj[v])
    b_size = rng.randint(0, max(1, n // 2))
    b_set = set(rng.sample(range(n), min(b_size, n)))
    return CpcInstance(g, b_set, ell, fams)

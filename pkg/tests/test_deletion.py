"""Deletion-set verification and exact search, checked against
independent brute-force shape oracles."""

import itertools
import random

from espath.deletion import (
    DeletionSet,
    find_deletion_set,
    is_split,
    split_bipartition,
    verify_deletion_set,
)
from espath.graph import (
    Graph,
    GraphError,
    complete_graph,
    cycle_graph,
    induced_subgraph,
    path_graph,
)

from helpers import all_graphs, random_connected_graph, random_tree


# ---------------------------------------------------------------- oracles

def _forest_oracle(g: Graph) -> bool:
    seen = [False] * g.n
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [(s, -1)]
        while stack:
            u, parent = stack.pop()
            hit_parent = False
            for w in g.adj[u]:
                if w == parent and not hit_parent:
                    hit_parent = True
                    continue
                if seen[w]:
                    return False
                seen[w] = True
                stack.append((w, u))
    return True


def _linear_forest_oracle(g: Graph) -> bool:
    return all(g.degree(v) <= 2 for v in range(g.n)) and _forest_oracle(g)


def _split_oracle(g: Graph) -> bool:
    """Try every subset as the clique side."""
    for mask in range(1 << g.n):
        side = [v for v in range(g.n) if mask >> v & 1]
        rest = [v for v in range(g.n) if not mask >> v & 1]
        if all(g.has_edge(u, v) for u, v in itertools.combinations(side, 2)) \
                and not any(g.has_edge(u, v) for u, v in itertools.combinations(rest, 2)):
            return True
    return False


_SHAPES = {"FVS": _forest_oracle, "DPD": _linear_forest_oracle, "SVD": _split_oracle}


def _brute_minimum(g: Graph, kind: str, kmax: int):
    shape = _SHAPES[kind]
    for size in range(kmax + 1):
        for cand in itertools.combinations(range(g.n), size):
            residual, _ = induced_subgraph(g, set(range(g.n)) - set(cand))
            if shape(residual):
                return size
    return None


# ----------------------------------------------------------- verification

def test_verify_fvs_on_c4():
    g = cycle_graph(4)
    assert verify_deletion_set(g, DeletionSet("FVS", frozenset({0})))
    assert not verify_deletion_set(g, DeletionSet("FVS", frozenset()))


def test_verify_svd_on_c4():
    g = cycle_graph(4)  # K4 minus a perfect matching; P3 remains, P3 is split
    for v in range(4):
        assert verify_deletion_set(g, DeletionSet("SVD", frozenset({v})))


def test_verify_dpd_needs_low_degree():
    g = Graph(4, [(0, 1), (0, 2), (0, 3)])
    assert not verify_deletion_set(g, DeletionSet("DPD", frozenset()))
    assert verify_deletion_set(g, DeletionSet("DPD", frozenset({0})))
    assert verify_deletion_set(g, DeletionSet("DPD", frozenset({1})))


def test_verify_rejects_bad_input():
    g = path_graph(3)
    try:
        verify_deletion_set(g, DeletionSet("XYZ", frozenset()))
        assert False
    except GraphError:
        pass
    try:
        verify_deletion_set(g, DeletionSet("FVS", frozenset({7})))
        assert False
    except GraphError:
        pass


# ------------------------------------------------------------------ split

def test_split_bipartition_p3():
    c, i = split_bipartition(path_graph(3))
    assert c == frozenset({0, 1}) and i == frozenset({2})


def test_split_bipartition_k4_and_empty():
    c, i = split_bipartition(complete_graph(4))
    assert c == frozenset(range(4)) and i == frozenset()
    c, i = split_bipartition(Graph(3, []))
    assert len(c) <= 1 and len(c) + len(i) == 3


def test_split_rejects_forbidden_graphs():
    two_k2 = Graph(4, [(0, 1), (2, 3)])
    for g in (cycle_graph(4), cycle_graph(5), two_k2):
        assert not is_split(g)
        try:
            split_bipartition(g)
            assert False
        except GraphError:
            pass


def test_split_matches_brute_oracle_exhaustive():
    for n in range(5):
        for g in all_graphs(n):
            assert is_split(g) == _split_oracle(g)


def test_split_matches_brute_oracle_random():
    rng = random.Random(5)
    for _ in range(300):
        n = rng.randint(5, 8)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < rng.choice((0.2, 0.5, 0.8))]
        g = Graph(n, edges)
        assert is_split(g) == _split_oracle(g)


# ----------------------------------------------------------------- search

def test_find_on_tree_is_empty():
    g = random_tree(random.Random(1), 9)
    for kind in ("FVS",):
        ds = find_deletion_set(g, kind, 3)
        assert ds is not None and ds.vertices == frozenset() and ds.verified


def test_find_dpd_on_c6():
    ds = find_deletion_set(cycle_graph(6), "DPD", 3)
    assert ds is not None and len(ds.vertices) == 1


def test_find_svd_on_c5():
    # removing one vertex of C5 leaves P4, and P4 is split (middle two
    # vertices form the clique side), so a single deletion suffices
    assert _brute_minimum(cycle_graph(5), "SVD", 5) == 1
    ds = find_deletion_set(cycle_graph(5), "SVD", 5)
    assert ds is not None and len(ds.vertices) == 1


def test_find_respects_kmax():
    g = complete_graph(6)  # FVS needs n-2 = 4 vertices
    assert find_deletion_set(g, "FVS", 3) is None
    ds = find_deletion_set(g, "FVS", 4)
    assert ds is not None and len(ds.vertices) == 4


def test_minimality_exhaustive_small():
    for n in range(1, 5):
        for g in all_graphs(n):
            for kind in ("FVS", "DPD", "SVD"):
                want = _brute_minimum(g, kind, n)
                got = find_deletion_set(g, kind, n)
                assert got is not None and len(got.vertices) == want
                assert verify_deletion_set(g, got)


def test_minimality_random_medium():
    rng = random.Random(77)
    for _ in range(120):
        n = rng.randint(5, 8)
        g = random_connected_graph(rng, n, rng.choice((0.25, 0.4, 0.6)))
        for kind in ("FVS", "DPD", "SVD"):
            want = _brute_minimum(g, kind, n)
            got = find_deletion_set(g, kind, n)
            assert got is not None and len(got.vertices) == want, \
                (kind, g.edges())
            assert verify_deletion_set(g, got)


def test_every_dpd_is_an_fvs():
    rng = random.Random(9)
    for _ in range(60):
        g = random_connected_graph(rng, rng.randint(4, 8), 0.35)
        ds = find_deletion_set(g, "DPD", g.n)
        assert ds is not None
        assert verify_deletion_set(g, DeletionSet("FVS", ds.vertices))

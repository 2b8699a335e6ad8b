"""Exhaustive ground-truth solver for the eccentricity shortest path problem.

For every ordered endpoint pair (s, t) we walk the shortest-path DAG from s
to t carrying the set of vertices that still need covering as a bitmask.
A vertex is dropped from consideration (and the branch pruned) as soon as no
vertex reachable on the remaining DAG suffix could cover it; states
(vertex, residual mask) are memoized. The search is exact: it either answers
correctly or raises a budget error, never returns a wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import INF, DistanceMatrix, Graph, all_pairs_distances, is_connected

DEFAULT_ORACLE_BUDGET = 1 << 24


class OracleBudgetError(RuntimeError):
    """Memoization budget exhausted before the search finished."""


@dataclass
class EspAnswer:
    feasible: bool
    certificate: list[int] | None
    ell_used: int


def _dag_successors(g: Graph, ds: list[int], dt: list[int], d_st: int) -> list[list[int]]:
    """succ[v] = next hops of v on shortest s-t paths (ascending id)."""
    succ: list[list[int]] = [[] for _ in range(g.n)]
    for v in range(g.n):
        if ds[v] + dt[v] != d_st:
            continue
        for w in g.adj[v]:
            if ds[w] == ds[v] + 1 and ds[w] + dt[w] == d_st:
                succ[v].append(w)
    return succ


class _PairSearch:
    """DFS with memoization over one (s, t) endpoint pair."""

    def __init__(self, g, cover, succ, coverlater, t, budget_left):
        self.cover = cover
        self.succ = succ
        self.coverlater = coverlater
        self.t = t
        self.memo: dict[tuple[int, int], bool] = {}
        self.budget_left = budget_left

    def run(self, v: int, residual: int) -> list[int] | None:
        residual &= ~self.cover[v]
        if v == self.t:
            return [v] if residual == 0 else None
        if residual & ~self.coverlater[v]:
            return None  # some vertex can never be covered from here on
        key = (v, residual)
        hit = self.memo.get(key)
        if hit is False:
            return None
        if len(self.memo) >= self.budget_left:
            raise OracleBudgetError(
                f"oracle budget exceeded ({self.budget_left} memo entries)"
            )
        for w in self.succ[v]:
            tail = self.run(w, residual)
            if tail is not None:
                return [v] + tail
        self.memo[key] = False
        return None


def esp_decide_oracle(
    g: Graph,
    ell: int,
    budget: int = DEFAULT_ORACLE_BUDGET,
    dm: DistanceMatrix | None = None,
) -> EspAnswer:
    """Does some shortest path P of g have ecc_G(P) <= ell?

    Endpoint pairs are tried in lexicographic order and the first feasible
    certificate wins, so the output is deterministic.
    """
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if not is_connected(g):
        raise ValueError("oracle requires a connected graph")
    if dm is None:
        dm = all_pairs_distances(g)
    n = g.n
    cover = [0] * n
    for v in range(n):
        mask = 0
        row = dm.row(v)
        for u in range(n):
            if row[u] <= ell:
                mask |= 1 << u
        cover[v] = mask
    full = (1 << n) - 1
    budget_left = budget
    for s in range(n):
        ds = dm.row(s)
        for t in range(n):
            dt = dm.row(t)
            d_st = ds[t]
            succ = _dag_successors(g, ds, dt, d_st)
            # everything a continuation from v could still cover
            coverlater = [0] * n
            order = sorted((x for x in range(n) if ds[x] + dt[x] == d_st),
                           key=lambda x: -ds[x])
            for v in order:
                acc = cover[v]
                for w in succ[v]:
                    acc |= coverlater[w]
                coverlater[v] = acc
            search = _PairSearch(g, cover, succ, coverlater, t, budget_left)
            path = search.run(s, full)
            budget_left -= len(search.memo)
            if budget_left <= 0:
                raise OracleBudgetError(f"oracle budget exceeded ({budget})")
            if path is not None:
                return EspAnswer(True, path, ell)
    return EspAnswer(False, None, ell)


def mesp_optimum(
    g: Graph, budget: int = DEFAULT_ORACLE_BUDGET, dm: DistanceMatrix | None = None
) -> tuple[int, list[int]]:
    """Smallest ell with a feasible answer, plus a witness path."""
    if dm is None:
        dm = all_pairs_distances(g)
    ell = 0
    while True:
        ans = esp_decide_oracle(g, ell, budget=budget, dm=dm)
        if ans.feasible:
            assert ans.certificate is not None
            return ell, ans.certificate
        ell += 1
        # a path through a center vertex always works at ell = radius
        assert ell <= dm.radius(), "searched past the radius without an answer"


class PathCapError(RuntimeError):
    pass


def enumerate_shortest_paths(
    g: Graph, s: int, t: int, cap: int, dm: DistanceMatrix | None = None
) -> list[list[int]]:
    """All shortest s-t paths; error if there are more than cap."""
    if dm is None:
        dm = all_pairs_distances(g)
    ds, dt = dm.row(s), dm.row(t)
    d_st = ds[t]
    if d_st >= INF:
        raise ValueError("endpoints are not connected")
    succ = _dag_successors(g, ds, dt, d_st)
    out: list[list[int]] = []
    stack: list[int] = [s]

    def walk(v: int) -> None:
        if v == t:
            if len(out) >= cap:
                raise PathCapError(f"more than {cap} shortest paths")
            out.append(stack.copy())
            return
        for w in succ[v]:
            stack.append(w)
            walk(w)
            stack.pop()

    walk(s)
    return out

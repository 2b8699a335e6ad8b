"""Parameterized ESP solvers.

esp_fvs_decide / mesp_fvs_optimum / esp_fvs_approx run the full skeleton ->
marking -> enrichment -> path-cover pipeline with the exact or relaxed
distance codomain. esp_dpd_decide is the same machine with declared
distances quantized to the set Q derived from pairwise deletion-set
distances. esp_svd_decide is a separate guess-and-construct search that
exploits the residual split structure, with an oracle fallback for small
ell. All solvers return directly verified certificates.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Optional

from .cpc import cpc_solve
from .deletion import split_bipartition
from .graph import (
    INF,
    DistanceMatrix,
    Graph,
    GraphError,
    induced_subgraph,
    is_shortest_path,
    path_eccentricity,
)
from .oracle import EspAnswer, esp_decide_oracle
from .pipeline import (
    PipelineInternalError,
    assemble_certificate,
    build_cpc_instance,
    enumerate_enriched,
    mark_components,
    rr2,
    sanity_test_2,
)
from .skeleton import (
    DistanceCodomain,
    SkeletonBudgetError,
    SkeletonContext,
    enumerate_skeletons,
    expand_frame,
    frame_size,
    iter_anchor_frames,
    sanity_test_1,
)

DEFAULT_SKELETON_BUDGET = 1 << 22


# ------------------------------------------------------- shared pipeline

def _bump(counters: Optional[dict], key: str, by: int = 1) -> None:
    if counters is not None:
        counters[key] = counters.get(key, 0) + by


def _try_skeleton(ctx: SkeletonContext, ell: int, cod: DistanceCodomain,
                  sk, k: int, counters: Optional[dict] = None) -> Optional[list[int]]:
    """Certificate for one skeleton, or None when no enrichment works."""
    _bump(counters, "skeletons")
    if sanity_test_1(ctx, ell, cod, sk) is not None:
        return None
    _bump(counters, "sanity1_pass")
    c1, marked = mark_components(ctx, ell, cod, sk)
    if not rr2(c1, k):
        return None
    for esk in enumerate_enriched(ctx, sk, sorted(marked)):
        _bump(counters, "enriched")
        if sanity_test_2(ctx, ell, cod, esk) is not None:
            continue
        built = build_cpc_instance(ctx, ell, cod, esk)
        if built is None:
            continue
        inst, idmap = built
        chosen = cpc_solve(inst, counters)
        if chosen is None:
            continue
        interiors = {fam.segment_index: tuple(idmap.to_old(p))
                     for fam, p in zip(inst.families, chosen)}
        return assemble_certificate(ctx, ell, cod, esk, interiors)
    return None


def _decide_with_codomain(ctx: SkeletonContext, ell: int,
                          cod: DistanceCodomain, budget: int,
                          counters: Optional[dict] = None) -> Optional[list[int]]:
    k = len(ctx.S)
    for sk in enumerate_skeletons(ctx.g, sorted(ctx.S), ell, cod, budget,
                                  ctx=ctx):
        path = _try_skeleton(ctx, ell, cod, sk, k, counters)
        if path is not None:
            return path
    return None


def _radius_or_raise(ctx: SkeletonContext) -> int:
    r = ctx.dm.radius()
    if r >= INF:
        raise GraphError("graph is disconnected")
    return r


# ------------------------------------------------------------ fvs solver

def esp_fvs_decide(g: Graph, s_set: Iterable[int], ell: int,
                   budget: int = DEFAULT_SKELETON_BUDGET,
                   counters: Optional[dict] = None) -> EspAnswer:
    ctx = SkeletonContext(g, sorted(s_set))
    path = _decide_with_codomain(ctx, ell, DistanceCodomain.exact(ell), budget,
                                 counters)
    return EspAnswer(path is not None, path, ell)


def mesp_fvs_optimum(g: Graph, s_set: Iterable[int],
                     budget: int = DEFAULT_SKELETON_BUDGET,
                     counters: Optional[dict] = None) -> tuple[int, list[int]]:
    """Minimum ell with a certificate. The loop is bounded by the radius,
    where a single-vertex center path is always feasible."""
    ctx = SkeletonContext(g, sorted(s_set))
    for ell in range(_radius_or_raise(ctx) + 1):
        path = _decide_with_codomain(ctx, ell, DistanceCodomain.exact(ell),
                                     budget, counters)
        if path is not None:
            return ell, path
    raise PipelineInternalError("no feasible ell up to the radius")


def esp_fvs_approx(g: Graph, s_set: Iterable[int], eps: float,
                   budget: int = DEFAULT_SKELETON_BUDGET,
                   counters: Optional[dict] = None) -> tuple[list[int], int]:
    """First path accepted under the relaxed codomain, with its ell.

    The returned path always satisfies
    path_eccentricity <= ell + ceil(eps * ell), re-checked here.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    ctx = SkeletonContext(g, sorted(s_set))
    for ell in range(_radius_or_raise(ctx) + 1):
        cod = DistanceCodomain.approx(eps, ell)
        path = _decide_with_codomain(ctx, ell, cod, budget, counters)
        if path is not None:
            ecc = path_eccentricity(g, path, ctx.dm)
            if ecc > ell + math.ceil(eps * ell):
                raise PipelineInternalError(
                    f"relaxed acceptance at ell={ell} has eccentricity {ecc}")
            return path, ell
    raise PipelineInternalError("no feasible ell up to the radius")


# ------------------------------------------------------------ dpd solver

def build_q_set(dist: DistanceMatrix, s_set: Iterable[int], ell: int) -> list[int]:
    """Quantized declared-distance values: every pairwise deletion-set
    distance, off by at most one, clipped to [0, ell]. Self-pairs are
    included, contributing 0 and 1."""
    s = sorted(s_set)
    base: set[int] = set()
    for x in s:
        for y in s:
            d = dist[x, y]
            base.update((d - 1, d, d + 1))
    q = sorted(v for v in base if 0 <= v <= ell)
    k = len(s)
    assert len(q) <= 2 + 3 * k * (k - 1) // 2
    assert len(q) <= 2 * k * k or k == 0
    return q


def esp_dpd_decide(g: Graph, s_set: Iterable[int], ell: int,
                   budget: int = DEFAULT_SKELETON_BUDGET,
                   counters: Optional[dict] = None) -> EspAnswer:
    """Decision via the quantized codomain.

    Pairwise-derived values cover declared distances attained at interior
    path vertices and at on-path deletion vertices; a distance attained at
    one of the two path ENDS equals that endpoint's own distance, which
    the pairwise set can miss. Each anchor frame therefore adds its (at
    most 2 per vertex) endpoint distances, keeping the value count
    parameter-bounded while restoring completeness at path ends.
    """
    ctx = SkeletonContext(g, sorted(s_set))
    q = build_q_set(ctx.dm, ctx.S, ell)
    k = len(ctx.S)
    frames = []
    total = 0
    for frame in iter_anchor_frames(ctx):
        m0, m_last, pi = frame
        x = ctx.S - set(pi) - {m0, m_last}
        extra = {ctx.dm[v, m0] for v in x} | {ctx.dm[v, m_last] for v in x}
        cod = DistanceCodomain.quantized(set(q) | extra, ell)
        frames.append((frame, cod))
        total += frame_size(ctx, frame, cod)
    if total > budget:
        raise SkeletonBudgetError(f"{total} skeletons exceed budget {budget}")
    for frame, cod in frames:
        for sk in expand_frame(ctx, frame, cod):
            path = _try_skeleton(ctx, ell, cod, sk, k, counters)
            if path is not None:
                return EspAnswer(True, path, ell)
    return EspAnswer(False, None, ell)


def mesp_dpd_optimum(g: Graph, s_set: Iterable[int],
                     budget: int = DEFAULT_SKELETON_BUDGET,
                     counters: Optional[dict] = None) -> tuple[int, list[int]]:
    ctx = SkeletonContext(g, sorted(s_set))
    for ell in range(_radius_or_raise(ctx) + 1):
        ans = esp_dpd_decide(g, sorted(ctx.S), ell, budget, counters)
        if ans.feasible:
            return ell, ans.certificate
    raise PipelineInternalError("no feasible ell up to the radius")


# ------------------------------------------------------------ svd solver

def _svd_chain(g: Graph, dm: DistanceMatrix, m0: int, m_last: int,
               tset: set[int]) -> Optional[list[int]]:
    """Anchor chain m0 .. m_last through tset, or None when impossible.

    On a shortest path the guessed vertices sit at pairwise distinct
    distances from the first endpoint, consecutive anchors are 1 or 2
    apart (interiors are single independent-side vertices), distances
    telescope, and any two anchors adjacent in G must be consecutive.
    """
    pairs = sorted((dm[m0, v], v) for v in tset)
    for i in range(len(pairs) - 1):
        if pairs[i][0] == pairs[i + 1][0]:
            return None
    raw = [m0] + [v for _, v in pairs] + [m_last]
    chain = [raw[0]]
    for v in raw[1:]:
        if v != chain[-1]:
            chain.append(v)
    if len(set(chain)) != len(chain):
        return None
    for i in range(len(chain) - 1):
        a, b = chain[i], chain[i + 1]
        if dm[a, b] not in (1, 2):
            return None
        if dm[m0, b] != dm[m0, a] + dm[a, b]:
            return None
    for i in range(len(chain)):
        for j in range(i + 2, len(chain)):
            if g.has_edge(chain[i], chain[j]):
                return None
    return chain


def _svd_candidates(g: Graph, dm: DistanceMatrix, ell: int, chain: list[int],
                    i_side: list[int], x_levels: list[tuple[int, int]],
                    g_assign: dict[int, int]) -> Optional[list[int]]:
    """First concatenation passing the final verification, or None.

    x_levels pairs each off-path deletion-set vertex with its declared
    distance level; g_assign names the segment whose interior must
    attain that distance exactly.
    """
    chain_set = set(chain)
    opts: list[list[Optional[int]]] = []
    for j in range(len(chain) - 1):
        a, b = chain[j], chain[j + 1]
        req = [(v, lvl) for v, lvl in x_levels if g_assign.get(v) == j]
        if dm[a, b] == 1:
            if req:
                return None
            opts.append([None])
            continue
        cands: list[Optional[int]] = [
            u for u in i_side
            if u not in chain_set and g.has_edge(u, a) and g.has_edge(u, b)
            and all(dm[u, v] == lvl for v, lvl in req)
        ]
        if not cands:
            return None
        opts.append(cands)
    for pick in itertools.product(*opts):
        used = [u for u in pick if u is not None]
        if len(set(used)) != len(used):
            continue
        path = [chain[0]]
        for j, u in enumerate(pick):
            if u is not None:
                path.append(u)
            path.append(chain[j + 1])
        if is_shortest_path(g, path, dm) and path_eccentricity(g, path, dm) <= ell:
            return path
    return None


def esp_svd_decide(g: Graph, s_set: Iterable[int], ell: int) -> EspAnswer:
    """Split-deletion parameterization: guess the deletion-set trace, the
    (at most two) clique-side path vertices, the endpoints, the declared
    distance levels 1..4 / far for the off-path deletion vertices, and the
    attaining segments; construct and verify. Small ell delegates to the
    reference search."""
    s = sorted(set(s_set))
    if ell <= 4:
        return esp_decide_oracle(g, ell)
    ctx = SkeletonContext(g, s)
    dm = ctx.dm
    residual, idmap = induced_subgraph(g, set(range(g.n)) - set(s))
    c_loc, i_loc = split_bipartition(residual)
    c_side = sorted(idmap.old_of_new[v] for v in c_loc)
    i_side = sorted(idmap.old_of_new[v] for v in i_loc)

    cstar_choices: list[tuple[int, ...]] = [()]
    cstar_choices += [(c,) for c in c_side]
    cstar_choices += list(itertools.combinations(c_side, 2))

    for m0 in range(g.n):
        for m_last in range(g.n):
            if dm[m0, m_last] >= INF:
                continue
            for m_mask in range(1 << len(s)):
                mset = {s[i] for i in range(len(s)) if m_mask >> i & 1}
                x = [v for v in s if v not in mset]
                for cstar in cstar_choices:
                    chain = _svd_chain(g, dm, m0, m_last, mset | set(cstar))
                    if chain is None:
                        continue
                    if len(chain) == 1:
                        if path_eccentricity(g, [m0], dm) <= ell:
                            return EspAnswer(True, [m0], ell)
                        continue
                    # declared levels: distance exactly 1..4, or 5 = "far";
                    # a level below some anchor distance is contradictory
                    allowed: list[list[int]] = []
                    for v in x:
                        mind = min(dm[v, c] for c in chain)
                        lv = [i for i in (1, 2, 3, 4) if i <= mind]
                        if mind >= 5:
                            lv.append(5)
                        allowed.append(lv)
                    if any(not lv for lv in allowed):
                        continue
                    n_seg = len(chain) - 1
                    for levels in itertools.product(*allowed):
                        x_levels = [(v, lvl) for v, lvl in zip(x, levels)
                                    if lvl <= 4]
                        # anchors at the exact declared distance attain it
                        # themselves; only strictly-farther vertices need
                        # an interior witness
                        xprime = [v for v, lvl in x_levels
                                  if all(dm[v, c] > lvl for c in chain)]
                        for gvals in itertools.product(range(n_seg),
                                                       repeat=len(xprime)):
                            g_assign = dict(zip(xprime, gvals))
                            path = _svd_candidates(g, dm, ell, chain, i_side,
                                                   x_levels, g_assign)
                            if path is not None:
                                return EspAnswer(True, path, ell)
    return EspAnswer(False, None, ell)


def mesp_svd_optimum(g: Graph, s_set: Iterable[int]) -> tuple[int, list[int]]:
    ctx = SkeletonContext(g, sorted(set(s_set)))
    for ell in range(_radius_or_raise(ctx) + 1):
        ans = esp_svd_decide(g, sorted(ctx.S), ell)
        if ans.feasible:
            return ell, ans.certificate
    raise PipelineInternalError("no feasible ell up to the radius")

"""From a skeleton to a colorful path-cover instance and back.

Given a skeleton that survived the first sanity test, this module marks the
components of G - S that matter (those holding a vertex no anchor or pinned
deletion vertex can cover, plus one host per non-edge segment), discards
skeletons whose essential-component count already exceeds the budget, guesses
which marked component serves each segment (the enrichment), builds the
path-cover instance over the union of the used components, and finally glues
a chosen interior per segment back into a full path, re-verifying everything.

All distances are taken in the original graph; pruning (rr3_prune) exists as
a standalone operation and for the safety property test, but the solver flow
simply restricts the enrichment universe to marked components.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .cpc import CpcInstance, FeasibleFamily
from .graph import (Graph, IdMap, induced_subgraph, is_shortest_path,
                    is_valid_path)
from .skeleton import (
    DistanceCodomain,
    Skeleton,
    SkeletonContext,
    realizes,
    segment_family,
)


class PipelineInternalError(RuntimeError):
    """An assembled path failed its own verification; indicates a bug."""


@dataclass(frozen=True)
class EnrichedSkeleton:
    """A skeleton plus a guess gamma of the component serving each segment.

    gamma[i] is None exactly when the segment needs no interior (its ends
    are adjacent, or coincide in the degenerate single-vertex skeleton)."""

    base: Skeleton
    gamma: tuple

    def __post_init__(self):
        if len(self.gamma) != len(self.base.M) + 1:
            raise ValueError("gamma length must match segment count")


def _is_far(ctx: SkeletonContext, ell: int, cod: DistanceCodomain,
            sk: Skeleton, v: int) -> bool:
    """No anchor covers v within ell and no pinned deletion vertex vouches
    for it; such a vertex must end up within ell of some chosen interior."""
    dm = ctx.dm
    if any(dm[v, a] <= ell for a in sk.anchors):
        return False
    return all(dm[v, u] > cod.bucket(sk.f_of(u)).radius for u in sk.X)


def _segment_needs_interior(ctx: SkeletonContext, a: int, b: int) -> bool:
    return a != b and not ctx.g.has_edge(a, b)


def mark_components(ctx: SkeletonContext, ell: int, cod: DistanceCodomain,
                    sk: Skeleton) -> tuple[frozenset, frozenset]:
    """(essential components, all marked components).

    Step 1 marks every component holding a far vertex. Step 2 walks the
    segments in order and, for each one needing an interior, additionally
    marks the lowest-id still-unmarked component hosting a feasible
    candidate (components are already indexed by smallest vertex id)."""
    c1 = set()
    for ci, comp in enumerate(ctx.components):
        if any(_is_far(ctx, ell, cod, sk, v) for v in comp):
            c1.add(ci)
    marked = set(c1)
    for i, a, b in sk.segments():
        if _segment_needs_interior(ctx, a, b):
            hosts = sorted({c.comp for c in segment_family(ctx, cod, sk, i)})
            extra = next((c for c in hosts if c not in marked), None)
            if extra is not None:
                marked.add(extra)
        else:
            # an edge (or single-vertex) segment consumes no host, but a
            # non-S endpoint still physically sits in its component; keep
            # it or pruning would delete the path's own ends
            for v in (a, b):
                if v not in ctx.S:
                    marked.add(ctx.comp_of[v])
    return frozenset(c1), frozenset(marked)


def rr2(c1: frozenset, k: int) -> bool:
    """True = keep going; reject once k+2 components each demand coverage
    (a path with k+1 anchor gaps cannot serve that many)."""
    return len(c1) < k + 2


def rr3_prune(ctx: SkeletonContext, c_star) -> tuple[Graph, IdMap]:
    """Delete every unmarked component of G - S."""
    keep = set(ctx.S)
    for ci in c_star:
        keep.update(ctx.components[ci])
    return induced_subgraph(ctx.g, keep)


def enumerate_enriched(ctx: SkeletonContext, sk: Skeleton,
                       comp_ids: Sequence[int]) -> Iterator[EnrichedSkeleton]:
    """All gamma maps over the given component universe, edge segments
    pinned to None, in deterministic lexicographic order."""
    allowed = tuple(sorted(comp_ids))
    options = []
    for i, a, b in sk.segments():
        options.append(allowed if _segment_needs_interior(ctx, a, b)
                       else (None,))
    for combo in itertools.product(*options):
        yield EnrichedSkeleton(sk, combo)


def sanity_test_2(ctx: SkeletonContext, ell: int, cod: DistanceCodomain,
                  esk: EnrichedSkeleton):
    """1: gamma disagrees with which segments need interiors.
    2: a guessed component hosts no feasible candidate for its segment.
    None: passed."""
    sk = esk.base
    for i, a, b in sk.segments():
        needs = _segment_needs_interior(ctx, a, b)
        if (esk.gamma[i] is not None) != needs:
            return 1
    for i, a, b in sk.segments():
        c = esk.gamma[i]
        if c is None:
            continue
        if not any(cand.comp == c
                   for cand in segment_family(ctx, cod, sk, i)):
            return 2
    return None


def build_cpc_instance(ctx: SkeletonContext, ell: int, cod: DistanceCodomain,
                       esk: EnrichedSkeleton):
    """(CpcInstance over the used components, id map), or None when this
    enrichment cannot possibly work: a required family is empty, or some
    far vertex lives outside every used component (no interior could reach
    it within ell -- any route would cross S and overshoot)."""
    sk = esk.base
    fams: list[FeasibleFamily] = []
    used: list[int] = []
    for i, a, b in sk.segments():
        c = esk.gamma[i]
        if c is None:
            continue
        paths = [cand.interior
                 for cand in segment_family(ctx, cod, sk, i)
                 if cand.comp == c]
        if not paths:
            return None
        fams.append(FeasibleFamily(paths, segment_index=i, component=c))
        used.append(c)
    allowed: set[int] = set()
    for c in sorted(set(used)):
        allowed.update(ctx.components[c])
    far = [v for v in range(ctx.g.n)
           if v not in ctx.S and _is_far(ctx, ell, cod, sk, v)]
    if any(v not in allowed for v in far):
        return None
    forest, idmap = induced_subgraph(ctx.g, allowed)
    local_fams = [
        FeasibleFamily([tuple(idmap.to_new(p)) for p in f.paths],
                       f.segment_index, f.component)
        for f in fams
    ]
    b_local = idmap.to_new(far)
    return CpcInstance(forest, b_local, ell, local_fams), idmap


def _check_relaxed(ctx: SkeletonContext, ell: int, cod: DistanceCodomain,
                   sk: Skeleton, p: list[int]) -> bool:
    """Verification for bucketed approximate runs: trace, coverage with
    vouching, and the upper half of the location condition. (Interior
    swaps may lower a pinned vertex's distance below its bucket floor
    without breaking the headline guarantee, so the exact-realization
    check is too strict here.)"""
    dm = ctx.dm
    if p[0] != sk.m0 or p[-1] != sk.m_last:
        return False
    if tuple(v for v in p if v in ctx.S and v not in (sk.m0, sk.m_last)) \
            != sk.M:
        return False
    if any(x in p for x in sk.X):
        return False
    pset = set(p)
    for v in range(ctx.g.n):
        if v in pset:
            continue
        if min(dm[v, w] for w in p) <= ell:
            continue
        if not any(dm[v, x] <= cod.bucket(sk.f_of(x)).radius for x in sk.X):
            return False
    for x in sk.X:
        if min(dm[x, w] for w in p) > cod.bucket(sk.f_of(x)).dmax:
            return False
    return True


def assemble_certificate(ctx: SkeletonContext, ell: int,
                         cod: DistanceCodomain, esk: EnrichedSkeleton,
                         interiors: Mapping[int, Sequence[int]]) -> list[int]:
    """Glue anchors and chosen interiors (original-graph ids, keyed by
    segment index) into the final path, verifying before returning."""
    sk = esk.base
    path = [sk.m0]
    for i, a, b in sk.segments():
        if a == b:
            continue
        if ctx.g.has_edge(a, b):
            path.append(b)
            continue
        if i not in interiors:
            raise PipelineInternalError(f"segment {i} has no chosen interior")
        path.extend(interiors[i])
        path.append(b)
    if not is_valid_path(ctx.g, path) or not is_shortest_path(ctx.g, path, ctx.dm):
        raise PipelineInternalError("assembled walk is not a shortest path")
    if cod.mode == "approx":
        ok = _check_relaxed(ctx, ell, cod, sk, path)
    else:
        ok = realizes(ctx, ell, cod, sk, path)
    if not ok:
        raise PipelineInternalError("assembled path fails realization checks")
    return path

"""Skeleton machinery: the guessed certificate structure and its checks.

A skeleton fixes the endpoints of a candidate shortest path, the ordered
deletion-set vertices on it (M with ordering pi), and for every remaining
deletion-set vertex x (the set X, off the path) a declared path distance
f(x) drawn from a pluggable codomain plus a location tag g(x) saying where
on the path that distance is realized (at anchor index i, or strictly
inside segment (i, i+1)).

The codomain abstraction lets one engine serve the exact solver (values
1..ell), the quantized variant (values Q), and the (1+eps)-approximation
(two buckets). Every codomain value is a bucket (value, dmin, dmax, radius):
a declared value stands for a realized distance in [dmin, dmax], and a
vertex x with f(x)=value vouches for covering everything within radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .graph import (
    INF,
    DistanceMatrix,
    Graph,
    all_pairs_distances,
    bfs_distances,
    connected_components,
    dist_to_path,
    is_shortest_path,
    path_eccentricity,
)


class SkeletonBudgetError(RuntimeError):
    """Predicted enumeration size exceeds the budget (raised before emitting)."""


class Bucket(NamedTuple):
    value: int
    dmin: int
    dmax: int
    radius: int


class DistanceCodomain:
    """Declared-distance buckets for off-path deletion-set vertices."""

    def __init__(self, mode: str, ell: int, buckets: tuple[Bucket, ...]):
        self.mode = mode
        self.ell = ell
        self.buckets = buckets
        self._by_value = {b.value: b for b in buckets}

    @classmethod
    def exact(cls, ell: int) -> "DistanceCodomain":
        return cls("exact", ell, tuple(Bucket(d, d, d, ell - d) for d in range(1, ell + 1)))

    @classmethod
    def quantized(cls, q: Sequence[int], ell: int) -> "DistanceCodomain":
        vals = sorted({v for v in q if 1 <= v <= ell})
        return cls("quantized", ell, tuple(Bucket(v, v, v, ell - v) for v in vals))

    @classmethod
    def approx(cls, eps: float, ell: int) -> "DistanceCodomain":
        if eps <= 0:
            raise ValueError("eps must be positive")
        lo = math.ceil(eps * ell)
        if ell == 0:
            buckets: tuple[Bucket, ...] = ()
        elif lo >= ell:
            # threshold at or past ell: one bucket vouching for radius ell
            buckets = (Bucket(ell, 1, ell, ell),)
        elif lo <= 1:
            buckets = (Bucket(ell, 1, ell, 1),)
        else:
            buckets = (Bucket(lo, 1, lo - 1, ell), Bucket(ell, lo, ell, lo))
        return cls("approx", ell, buckets)

    def values(self) -> list[int]:
        return [b.value for b in self.buckets]

    def bucket(self, value: int) -> Bucket:
        return self._by_value[value]

    def bucket_of_distance(self, d: int) -> Bucket:
        for b in self.buckets:
            if b.dmin <= d <= b.dmax:
                return b
        raise ValueError(f"distance {d} outside every codomain bucket ({self.mode})")


# g-tags: ("idx", i) with i in [0, |M|+1], or ("seg", i) with i in [0, |M|]
GTag = tuple[str, int]


@dataclass(frozen=True)
class Skeleton:
    m0: int
    m_last: int
    M: tuple[int, ...]  # ordered by pi
    X: tuple[int, ...]  # sorted
    f: tuple[int, ...]  # f[i] is the declared value for X[i]
    g: tuple[GTag, ...]  # g[i] is the location tag for X[i]

    @property
    def anchors(self) -> tuple[int, ...]:
        """The anchor chain m0, M..., m_last (positions 0..|M|+1)."""
        return (self.m0, *self.M, self.m_last)

    def f_of(self, x: int) -> int:
        return self.f[self.X.index(x)]

    def g_of(self, x: int) -> GTag:
        return self.g[self.X.index(x)]

    def segments(self) -> list[tuple[int, int, int]]:
        """(segment index i, left anchor, right anchor) for i in 0..|M|."""
        chain = self.anchors
        return [(i, chain[i], chain[i + 1]) for i in range(len(chain) - 1)]


def order_on_shortest_path(dm: DistanceMatrix, mset: Sequence[int], s: int) -> list[int] | None:
    """The unique candidate ordering of mset along a shortest path from s:
    sort by d(s, .); a tie means no shortest path from s contains both."""
    dists = sorted((dm[s, v], v) for v in mset)
    for i in range(len(dists) - 1):
        if dists[i][0] == dists[i + 1][0]:
            return None
    return [v for _, v in dists]


def chain_telescopes(dm: DistanceMatrix, chain: Sequence[int]) -> bool:
    """d(m0, m_{i+1}) = d(m0, m_i) + d(m_i, m_{i+1}) along the whole chain,
    so that a concatenation of shortest segments is globally shortest."""
    total = 0
    for i in range(len(chain) - 1):
        step = dm[chain[i], chain[i + 1]]
        if step >= INF:
            return False
        total += step
        if dm[chain[0], chain[i + 1]] != total:
            return False
    return True


@dataclass
class _SegmentCandidate:
    interior: tuple[int, ...]  # na .. nb, neighbors of the two anchors
    comp: int  # component id in G - S
    vset: frozenset[int]
    dvec: list[int]  # dvec[v] = d_G(v, interior)


class _PairInfo:
    def __init__(self, d_restricted: int, memb_interior: frozenset[int],
                 candidates: list[_SegmentCandidate]):
        self.d_restricted = d_restricted
        self.memb_interior = memb_interior
        self.candidates = candidates


class SkeletonContext:
    """Shared immutable data for one (graph, deletion set) solve: distance
    matrix, residual components, and per-anchor-pair restricted-BFS caches."""

    def __init__(self, g: Graph, s_set: Sequence[int], dm: DistanceMatrix | None = None):
        self.g = g
        self.S = frozenset(s_set)
        self.dm = dm if dm is not None else all_pairs_distances(g)
        self.components = connected_components(g, self.S)
        self.comp_of = {v: ci for ci, comp in enumerate(self.components) for v in comp}
        self._pairs: dict[tuple[int, int], _PairInfo] = {}

    def pair_info(self, a: int, b: int) -> _PairInfo:
        """Restricted-distance data for the anchor pair (a, b); symmetric,
        interiors stored a-to-b for a <= b and reversed on the fly."""
        key = (a, b) if a <= b else (b, a)
        info = self._pairs.get(key)
        if info is None:
            info = self._build_pair(*key)
            self._pairs[key] = info
        if (a, b) == key:
            return info
        rev = [_SegmentCandidate(tuple(reversed(c.interior)), c.comp, c.vset, c.dvec)
               for c in info.candidates]
        return _PairInfo(info.d_restricted, info.memb_interior, rev)

    def _build_pair(self, a: int, b: int) -> _PairInfo:
        g, dm = self.g, self.dm
        blocked = self.S - {a, b}
        da = bfs_distances(g, a, blocked)
        db = bfs_distances(g, b, blocked)
        d_ab = dm[a, b]
        memb = frozenset(
            w for w in range(g.n)
            if w != a and w != b and da[w] < INF and db[w] < INF and da[w] + db[w] == d_ab
        )
        candidates: list[_SegmentCandidate] = []
        if a != b and d_ab >= 2 and d_ab < INF:
            comp_paths: dict[tuple[int, int], list[int] | None] = {}
            for na in g.adj[a]:
                if na in self.S or na == b:
                    continue
                for nb in g.adj[b]:
                    if nb in self.S or nb == a:
                        continue
                    ca = self.comp_of.get(na)
                    if ca is None or ca != self.comp_of.get(nb):
                        continue
                    path = comp_paths.get((na, nb))
                    if (na, nb) not in comp_paths:
                        path = self._tree_path(na, nb)
                        comp_paths[(na, nb)] = path
                    if path is None or len(path) != d_ab - 1:
                        continue
                    vset = frozenset(path)
                    if a in vset or b in vset:
                        continue
                    dvec = [min(dm[v, w] for w in path) for v in range(g.n)]
                    candidates.append(_SegmentCandidate(tuple(path), ca, vset, dvec))
        return _PairInfo(da[b], memb, candidates)

    def _tree_path(self, u: int, v: int) -> list[int] | None:
        """Unique path between u and v inside G - S (their shared component
        is a tree whenever S is a feedback vertex set)."""
        if u == v:
            return [u]
        parent: dict[int, int] = {u: u}
        stack = [u]
        while stack:
            x = stack.pop()
            if x == v:
                break
            for w in self.g.adj[x]:
                if w in self.S or w in parent:
                    continue
                parent[w] = x
                stack.append(w)
        if v not in parent:
            return None
        path = [v]
        while path[-1] != u:
            path.append(parent[path[-1]])
        path.reverse()
        return path


def skeleton_count_bound(n: int, k: int, ell: int) -> int:
    """The coarse upper-bound formula n^2 * 2^k * k! * ell^k * (2k+2)^k."""
    return n * n * (1 << k) * math.factorial(k) * ell**k * (2 * k + 2) ** k


def _g_options(m_size: int) -> list[GTag]:
    opts: list[GTag] = [("idx", i) for i in range(m_size + 2)]
    opts.extend(("seg", i) for i in range(m_size + 1))
    return opts


def iter_anchor_frames(ctx: SkeletonContext) -> Iterator[tuple[int, int, tuple[int, ...]]]:
    """All (m0, m_last, ordered M) frames with a unique, telescoping ordering.

    Deterministic: endpoints in lexicographic order, M subsets in mask order
    over the sorted eligible vertices.
    """
    n = ctx.g.n
    s_sorted = sorted(ctx.S)
    for m0 in range(n):
        for m_last in range(n):
            if ctx.dm[m0, m_last] >= INF:
                continue
            eligible = [v for v in s_sorted if v != m0 and v != m_last]
            for mask in range(1 << len(eligible)):
                mset = [eligible[i] for i in range(len(eligible)) if mask >> i & 1]
                pi = order_on_shortest_path(ctx.dm, mset, m0)
                if pi is None:
                    continue
                if not chain_telescopes(ctx.dm, (m0, *pi, m_last)):
                    continue
                yield m0, m_last, tuple(pi)


def frame_size(ctx: SkeletonContext, frame: tuple[int, int, tuple[int, ...]],
               cod: DistanceCodomain) -> int:
    m0, m_last, pi = frame
    x = ctx.S - set(pi) - {m0, m_last}
    if not x:
        return 1
    nvals = len(cod.values())
    return (nvals * (2 * len(pi) + 3)) ** len(x)


def expand_frame(ctx: SkeletonContext, frame: tuple[int, int, tuple[int, ...]],
                 cod: DistanceCodomain) -> Iterator[Skeleton]:
    """All skeletons of one anchor frame, f and g in mixed-radix order."""
    m0, m_last, pi = frame
    x = tuple(sorted(ctx.S - set(pi) - {m0, m_last}))
    if not x:
        yield Skeleton(m0, m_last, pi, (), (), ())
        return
    values = cod.values()
    gopts = _g_options(len(pi))
    if not values:
        return
    combos = [(fv, gt) for fv in values for gt in gopts]
    idx = [0] * len(x)
    while True:
        fs = tuple(combos[i][0] for i in idx)
        gs = tuple(combos[i][1] for i in idx)
        yield Skeleton(m0, m_last, pi, x, fs, gs)
        pos = len(x) - 1
        while pos >= 0:
            idx[pos] += 1
            if idx[pos] < len(combos):
                break
            idx[pos] = 0
            pos -= 1
        if pos < 0:
            return


def count_skeletons(ctx: SkeletonContext, cod: DistanceCodomain) -> int:
    """Exact number of skeletons enumerate_skeletons will emit."""
    return sum(frame_size(ctx, fr, cod) for fr in iter_anchor_frames(ctx))


def enumerate_skeletons(
    g: Graph,
    s_set: Sequence[int],
    ell: int,
    cod: DistanceCodomain,
    budget: int,
    ctx: SkeletonContext | None = None,
) -> Iterator[Skeleton]:
    """Every skeleton, in deterministic order; the exact emission count is
    precomputed and a budget error raised before anything is emitted."""
    if ctx is None:
        ctx = SkeletonContext(g, s_set)
    total = count_skeletons(ctx, cod)
    if total > budget:
        raise SkeletonBudgetError(f"{total} skeletons exceed budget {budget}")
    for frame in iter_anchor_frames(ctx):
        yield from expand_frame(ctx, frame, cod)


def sanity_test_1(ctx: SkeletonContext, ell: int, cod: DistanceCodomain,
                  sk: Skeleton) -> int | None:
    """The six rejection items; returns the first failing item or None.

    Item 6 (a required segment with an empty feasible family) is realized via
    family construction, matching how the pipeline consumes skeletons.
    """
    dm = ctx.dm
    chain = sk.anchors
    segs = sk.segments()

    # 1: a segment that is an edge (or degenerate) admits no interior
    for i, a, b in segs:
        if a == b or ctx.g.has_edge(a, b):
            if any(tag == ("seg", i) for tag in sk.g):
                return 1

    # 2: some anchor sits closer to x than the declared distance allows
    for pos, x in enumerate(sk.X):
        lo = cod.bucket(sk.f[pos]).dmin
        if any(dm[u, x] < lo for u in chain):
            return 2

    # 3: x is pinned to anchor i but that anchor is too far
    for pos, x in enumerate(sk.X):
        kind, i = sk.g[pos]
        if kind == "idx" and dm[x, chain[i]] > cod.bucket(sk.f[pos]).dmax:
            return 3

    # 4: restricted distance must match the global one on non-edge segments
    for i, a, b in segs:
        if a != b and not ctx.g.has_edge(a, b):
            if ctx.pair_info(a, b).d_restricted != dm[a, b]:
                return 4

    # 5: restricted shortest segments of two indices may not intersect
    for ii in range(len(segs)):
        _, a1, b1 = segs[ii]
        memb1 = ctx.pair_info(a1, b1).memb_interior
        if not memb1:
            continue
        for jj in range(ii + 1, len(segs)):
            _, a2, b2 = segs[jj]
            if memb1 & ctx.pair_info(a2, b2).memb_interior:
                return 5

    # 6: every non-edge segment needs at least one feasible interior
    for i, a, b in segs:
        if a != b and not ctx.g.has_edge(a, b):
            if not segment_family(ctx, cod, sk, i):
                return 6
    return None


def segment_family(ctx: SkeletonContext, cod: DistanceCodomain, sk: Skeleton,
                   seg_index: int) -> list[_SegmentCandidate]:
    """Feasible interiors for segment seg_index under this skeleton's f/g.

    A candidate must be a globally-shortest connector (cached per anchor
    pair), avoid the endpoints, realize f for every x pinned to this segment,
    and respect the f lower bound of every x in X.
    """
    chain = sk.anchors
    a, b = chain[seg_index], chain[seg_index + 1]
    out = []
    pinned = [(x, cod.bucket(sk.f[pos]))
              for pos, x in enumerate(sk.X) if sk.g[pos] == ("seg", seg_index)]
    lower = [(x, cod.bucket(sk.f[pos]).dmin) for pos, x in enumerate(sk.X)]
    for cand in ctx.pair_info(a, b).candidates:
        if sk.m0 in cand.vset or sk.m_last in cand.vset:
            continue
        if any(not (bk.dmin <= cand.dvec[x] <= bk.dmax) for x, bk in pinned):
            continue
        if any(cand.dvec[x] < lo for x, lo in lower):
            continue
        out.append(cand)
    return out


def realizes(ctx: SkeletonContext, ell: int, cod: DistanceCodomain,
             sk: Skeleton, p: Sequence[int]) -> bool:
    """The four realization conditions of a skeleton by a path."""
    g, dm = ctx.g, ctx.dm
    if not p or p[0] != sk.m0 or p[-1] != sk.m_last:
        return False
    # 1: deletion-set trace matches: interior S-vertices are exactly M in
    # pi-order, and no X vertex is on the path
    interior_s = tuple(v for v in p[1:-1] if v in ctx.S)
    if interior_s != sk.M:
        return False
    pset = set(p)
    if any(x in pset for x in sk.X):
        return False
    # 2: every vertex is covered, directly or vouched for by some x in X
    for v in range(g.n):
        if dist_to_path(dm, v, p) <= ell:
            continue
        if not any(dm[v, x] <= cod.bucket(sk.f[pos]).radius
                   for pos, x in enumerate(sk.X)):
            return False
    # 3: declared distances hold (as bucket ranges)
    for pos, x in enumerate(sk.X):
        bk = cod.bucket(sk.f[pos])
        if not (bk.dmin <= dist_to_path(dm, x, p) <= bk.dmax):
            return False
    # 4: each x attains its path distance at the declared location
    chain = sk.anchors
    anchor_pos: list[int] = []
    start = 0
    for c in chain:
        q = next(idx for idx in range(start, len(p)) if p[idx] == c)
        anchor_pos.append(q)
        start = q
    for pos, x in enumerate(sk.X):
        dxp = dist_to_path(dm, x, p)
        kind, i = sk.g[pos]
        if kind == "idx":
            if dm[x, chain[i]] != dxp:
                return False
        else:
            lo, hi = anchor_pos[i], anchor_pos[i + 1]
            if not any(dm[x, p[q]] == dxp for q in range(lo + 1, hi)):
                return False
    return True


def extract_skeleton(ctx: SkeletonContext, ell: int, cod: DistanceCodomain,
                     p: Sequence[int]) -> Skeleton:
    """Read a skeleton off a certificate path (shortest, ecc <= ell)."""
    g, dm = ctx.g, ctx.dm
    if not is_shortest_path(g, p, dm) or path_eccentricity(g, p, dm) > ell:
        raise ValueError("path is not a certificate at this ell")
    m0, m_last = p[0], p[-1]
    mm = tuple(v for v in p[1:-1] if v in ctx.S)
    x = tuple(sorted(ctx.S - set(mm) - {m0, m_last}))
    chain = (m0, *mm, m_last)
    chain_set = set(chain)
    anchor_pos = [idx for idx, v in enumerate(p) if v in chain_set]
    fs, gs = [], []
    for v in x:
        dvp = dist_to_path(dm, v, p)
        fs.append(cod.bucket_of_distance(dvp).value)
        q = next(idx for idx, u in enumerate(p) if dm[v, u] == dvp)
        if p[q] in chain_set:
            gs.append(("idx", chain.index(p[q])))
        else:
            seg = next(i for i in range(len(anchor_pos) - 1)
                       if anchor_pos[i] < q < anchor_pos[i + 1])
            gs.append(("seg", seg))
    return Skeleton(m0, m_last, mm, x, tuple(fs), tuple(gs))

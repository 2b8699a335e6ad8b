"""Colorful path cover on forests.

Instance: a forest, a budget ell, a set B of vertices to cover, and t
disjoint families of candidate tree paths. Question: pick exactly one path
per family so that every vertex of B lies within forest distance ell of a
chosen path.

cpc_solve runs a bottom-up tree DP over states (vertex, child-prefix index,
family subset, path-shape type, signed frontier). cpc_brute enumerates the
Cartesian product of the families and is the arbiter in differential tests.

The DP state at (v, d) summarizes T_{v,d} (v plus its first d child
subtrees). tp in 1..11 classifies how the solution path of v's own family
meets v (not at all; the single vertex v; climbing to the parent with its
far endpoint at v / in an earlier child / in child d / in a later child;
or staying below with endpoints in two of those regions). The signed value
records either the farthest still-uncovered B vertex (negative side, depth
at most ell-1) or the spare covering reach of the nearest chosen-path
vertex (positive side; +0 also encodes "no useful path in range").

True entries of tp >= 2 carry the set of concrete candidate paths that
realize the shape chain so far; combining a prefix entry with a child entry
intersects these sets, which keeps a single consistent witness path per
family (two half-shapes of different paths of the same family must not be
glued together).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .graph import (
    INF,
    DistanceMatrix,
    Graph,
    all_pairs_distances,
    connected_components,
)


class CpcInvariantError(ValueError):
    """The instance violates a structural invariant."""


class CpcBudgetError(RuntimeError):
    """Brute-force product too large."""


class CpcInternalError(RuntimeError):
    """A decided answer failed its own verification; indicates a bug."""


DEFAULT_CPC_BUDGET = 1 << 22

A_TYPE = {2, 3, 4, 6, 7, 9, 11}  # own-family path does not enter child d
B_TYPE = {5, 8, 10}  # own-family path descends into child d
# prefix shape(s) at (v, d-1) consistent with each shape at (v, d)
CHAIN = {2: (2,), 3: (3,), 4: (4, 5), 5: (6,), 6: (6,), 7: (7, 8),
         8: (9, 10), 9: (9, 10), 10: (11,), 11: (11,)}


@dataclass
class FeasibleFamily:
    paths: list[tuple[int, ...]]
    segment_index: int = -1
    component: int = -1


class CpcInstance:
    def __init__(self, forest: Graph, b_set, ell: int,
                 families: Sequence[FeasibleFamily], validate: bool = True):
        self.forest = forest
        self.B = frozenset(b_set)
        self.ell = ell
        self.families = list(families)
        # fcolor[v] = 1-based family index, 0 = on no family path
        self.fcolor = [0] * forest.n
        for j, fam in enumerate(self.families):
            for p in fam.paths:
                for v in p:
                    self.fcolor[v] = j + 1
        if validate:
            self._validate()

    @property
    def t(self) -> int:
        return len(self.families)

    def _validate(self) -> None:
        g = self.forest
        for comp in connected_components(g):
            cset = set(comp)
            inner = sum(1 for u in comp for w in g.adj[u] if w in cset) // 2
            if inner != len(comp) - 1:
                raise CpcInvariantError("forest has a cycle")
        if any(not (0 <= v < g.n) for v in self.B):
            raise CpcInvariantError("B vertex out of range")
        seen: dict[int, int] = {}
        for j, fam in enumerate(self.families):
            if not fam.paths:
                raise CpcInvariantError(f"family {j} is empty")
            comp_ids = set()
            for p in fam.paths:
                if len(set(p)) != len(p):
                    raise CpcInvariantError("family path repeats a vertex")
                for a, b in zip(p, p[1:]):
                    if not g.has_edge(a, b):
                        raise CpcInvariantError("family path not a forest path")
                for v in p:
                    if seen.setdefault(v, j) != j:
                        raise CpcInvariantError(
                            f"families {seen[v]} and {j} share vertex {v}")
                comp_ids.add(self._comp_of(p[0]))
            if len(comp_ids) != 1:
                raise CpcInvariantError(f"family {j} spans several trees")
        # adjacency color rule: touching nonzero colors must be equal
        for u in range(g.n):
            cu = self.fcolor[u]
            if cu == 0:
                continue
            for w in g.adj[u]:
                if self.fcolor[w] not in (0, cu):
                    raise CpcInvariantError(
                        f"adjacent vertices {u},{w} lie in different families")

    def _comp_of(self, v: int) -> int:
        if not hasattr(self, "_comp_map"):
            comps = connected_components(self.forest)
            self._components = comps
            self._comp_map = {u: i for i, c in enumerate(comps) for u in c}
        return self._comp_map[v]

    def components(self) -> list[list[int]]:
        self._comp_of(0) if self.forest.n else None
        return getattr(self, "_components", [])

    def to_json(self) -> dict:
        return {
            "n": self.forest.n,
            "edges": [[u, v] for u, v in self.forest.edges()],
            "B": sorted(self.B),
            "ell": self.ell,
            "families": [
                {"segment": f.segment_index, "component": f.component,
                 "paths": [list(p) for p in f.paths]}
                for f in self.families
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "CpcInstance":
        fams = [FeasibleFamily([tuple(p) for p in f["paths"]],
                               f.get("segment", -1), f.get("component", -1))
                for f in obj["families"]]
        g = Graph(obj["n"], [tuple(e) for e in obj["edges"]])
        return cls(g, set(obj["B"]), obj["ell"], fams)


def assign_families_to_trees(inst: CpcInstance) -> dict[int, list[int]]:
    """Tree index (component order) -> indices of the families living there."""
    out: dict[int, list[int]] = {}
    for j, fam in enumerate(inst.families):
        comps = {inst._comp_of(v) for p in fam.paths for v in p}
        if len(comps) != 1:
            raise CpcInvariantError(f"family {j} spans several trees")
        out.setdefault(comps.pop(), []).append(j)
    return out


def _path_covers(dm: DistanceMatrix, v: int, path: Sequence[int], ell: int) -> bool:
    return any(dm[v, w] <= ell for w in path)


def cpc_brute(inst: CpcInstance, budget: int = DEFAULT_CPC_BUDGET):
    """Exhaustive product over families; first covering selection in
    lexicographic path-index order, or None."""
    size = 1
    for fam in inst.families:
        size *= len(fam.paths)
        if size > budget:
            raise CpcBudgetError(f"product exceeds budget {budget}")
    dm = all_pairs_distances(inst.forest)
    for pick in itertools.product(*(range(len(f.paths)) for f in inst.families)):
        chosen = [inst.families[j].paths[pick[j]] for j in range(inst.t)]
        if all(any(_path_covers(dm, b, p, inst.ell) for p in chosen)
               for b in inst.B):
            return chosen
    return None


# ---------------------------------------------------------------------------
# the tree DP


class _RootedTree:
    def __init__(self, g: Graph, vertices: list[int]):
        self.root = min(vertices)
        self.parent: dict[int, int | None] = {self.root: None}
        self.children: dict[int, list[int]] = {}
        self.vertices = vertices
        order = [self.root]
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            kids = sorted(w for w in g.adj[v] if w != self.parent[v])
            self.children[v] = kids
            for w in kids:
                self.parent[w] = v
                order.append(w)
        self.pre = order
        self.tin: dict[int, int] = {}
        self.tout: dict[int, int] = {}
        self._euler(g)

    def _euler(self, g: Graph) -> None:
        t = 0
        stack: list[tuple[int, bool]] = [(self.root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                self.tout[v] = t
                continue
            self.tin[v] = t
            t += 1
            stack.append((v, True))
            for w in reversed(self.children[v]):
                stack.append((w, False))

    def deg(self, v: int) -> int:
        return len(self.children[v])

    def in_subtree(self, anc: int, u: int) -> bool:
        return self.tin[anc] <= self.tin[u] < self.tout[anc]

    def branch_of(self, v: int, u: int) -> int:
        """1-based index of v's child whose subtree holds u (u below v)."""
        while self.parent[u] != v:
            u = self.parent[u]  # type: ignore[assignment]
        return self.children[v].index(u) + 1

    def limited_subtree(self, v: int, d: int) -> list[int]:
        """Vertices of T_{v,d}: v plus its first d children's subtrees."""
        out = [v]
        for ch in self.children[v][:d]:
            out.extend(u for u in self.pre
                       if self.tin[ch] <= self.tin[u] < self.tout[ch])
        return out


# endpoint classification of a family path relative to a vertex on it
SELF = ("self", 0)
ABOVE = ("above", 0)


def _classify(tree: _RootedTree, v: int, e: int):
    if e == v:
        return SELF
    if tree.in_subtree(v, e):
        return ("branch", tree.branch_of(v, e))
    return ABOVE


def _shape_ok(tp: int, c1, c2, d: int, single: bool) -> bool:
    """Does a path with endpoint classes c1,c2 (relative to v) match shape tp
    at prefix index d? Containing the parent == having an endpoint above."""
    def seen(c):  # lies in T_{v,d-1}
        return c == SELF or (c[0] == "branch" and c[1] <= d - 1)

    for a, b in ((c1, c2), (c2, c1)):
        if tp == 2 and single:
            return True
        if tp == 3 and a == ABOVE and b == SELF:
            return True
        if tp == 4 and a == ABOVE and b[0] == "branch" and b[1] <= d - 1:
            return True
        if tp == 5 and a == ABOVE and b == ("branch", d):
            return True
        if tp == 6 and a == ABOVE and b[0] == "branch" and b[1] > d:
            return True
        if tp == 7 and not single and a != ABOVE and b != ABOVE \
                and seen(a) and seen(b):
            return True
        if tp == 8 and a != ABOVE and seen(a) and b == ("branch", d):
            return True
        if tp == 9 and a != ABOVE and seen(a) and b[0] == "branch" and b[1] > d:
            return True
        if tp == 10 and a == ("branch", d) and b[0] == "branch" and b[1] > d:
            return True
        if tp == 11 and a[0] == "branch" and a[1] > d \
                and b[0] == "branch" and b[1] > d:
            return True
    return False


def _combine(s1: int, s2: int, ell: int):
    """Merge prefix frontier s1 with child frontier s2 (child values measured
    at the child root, one edge below). Encoding: (+)e -> e, (-)e -> -1-e.
    Returns the merged encoded value, or None when dead (uncoverable)."""
    if s1 >= 0 and s2 >= 0:
        return max(s1, s2 - 1)
    if s1 < 0 <= s2:
        a = -1 - s1
        return s2 - 1 if a <= s2 - 1 else s1
    if s2 < 0 <= s1:
        b = -1 - s2
        if b <= s1 - 1:
            return s1
        return -2 - b if b + 1 <= ell - 1 else None
    a, b = -1 - s1, -1 - s2
    nf = max(a, b + 1)
    return -1 - nf if nf <= ell - 1 else None


@dataclass
class TreeTables:
    tree: _RootedTree
    # entries[(v, d)][(Ymask, tp, s)] = True (tp=1) | set of path ids (tp>=2)
    entries: dict = field(default_factory=dict)
    # bp[(v, d, Y, tp, s, qid-or-None)] = decomposition or ("base",)
    bp: dict = field(default_factory=dict)


class CpcTables:
    """Filled DP tables, one per tree, plus shared indices."""

    def __init__(self, inst: CpcInstance):
        self.inst = inst
        self.ell = inst.ell
        comps = inst.components() if inst.forest.n else []
        self.trees = [_RootedTree(inst.forest, comp) for comp in comps]
        self.tree_of = {v: i for i, tr in enumerate(self.trees)
                        for v in tr.vertices}
        self.assigned = assign_families_to_trees(inst)
        # per vertex: [(qid, endpoint classes)] for family paths through it
        self.paths_at: dict[int, list] = {v: [] for v in range(inst.forest.n)}
        self.path_by_id: dict[tuple[int, int], tuple[int, ...]] = {}
        for j, fam in enumerate(inst.families):
            for pi, p in enumerate(fam.paths):
                self.path_by_id[(j, pi)] = p
                tr = self.trees[self.tree_of[p[0]]]
                for v in p:
                    c1 = _classify(tr, v, p[0])
                    c2 = _classify(tr, v, p[-1])
                    self.paths_at[v].append(((j, pi), c1, c2, len(p) == 1))

    def fill(self) -> None:
        for tr in self.trees:
            self._fill_tree(tr)

    # -- helpers ---------------------------------------------------------

    def _shape_ids(self, v: int, d: int, tp: int) -> set:
        out = set()
        for qid, c1, c2, single in self.paths_at[v]:
            if _shape_ok(tp, c1, c2, d, single):
                out.add(qid)
        return out

    def _set_tp1(self, tab: TreeTables, v, d, y, s, dec) -> None:
        key = (y, 1, s)
        ent = tab.entries[(v, d)]
        if key not in ent:
            ent[key] = True
            tab.bp[(v, d, y, 1, s, None)] = dec

    def _set_tpx(self, tab: TreeTables, v, d, y, tp, sp: set, dec) -> None:
        key = (y, tp, self.ell)
        ent = tab.entries[(v, d)]
        cur = ent.get(key)
        if cur is None:
            cur = ent[key] = set()
        for q in sp:
            if q not in cur:
                cur.add(q)
                tab.bp[(v, d, y, tp, self.ell, q)] = dec

    # -- the fill --------------------------------------------------------

    def _fill_tree(self, tr: _RootedTree) -> None:
        inst, ell = self.inst, self.ell
        tab = TreeTables(tr)
        self.tables = getattr(self, "tables", {})
        self.tables[tr.root] = tab
        for v in reversed(tr.pre):  # postorder: children before parents
            tab.entries[(v, 0)] = {}
            # uniform d=0 base over T_{v,0} = {v}
            if v in inst.B:
                self._set_tp1(tab, v, 0, 0, -1, ("base",))
            else:
                self._set_tp1(tab, v, 0, 0, 0, ("base",))
            fv = inst.fcolor[v]
            if fv:
                ybit = 1 << (fv - 1)
                for tp in range(2, 12):
                    sp = self._shape_ids(v, 0, tp)
                    if sp:
                        self._set_tpx(tab, v, 0, ybit, tp, sp, ("base",))
            for d in range(1, tr.deg(v) + 1):
                self._fill_cell(tab, v, d)

    def _fill_cell(self, tab: TreeTables, v: int, d: int) -> None:
        inst, ell = self.inst, self.ell
        tr = tab.tree
        ch = tr.children[v][d - 1]
        ent: dict = {}
        tab.entries[(v, d)] = ent
        prefix = tab.entries[(v, d - 1)]
        child = tab.entries[(ch, tr.deg(ch))]

        pre1 = [(y, s) for (y, tp, s) in prefix if tp == 1]
        ch1 = [(y, s) for (y, tp, s) in child if tp == 1]
        ch_on = [(y, tp) for (y, tp, s) in child if tp in (2, 7, 8)]

        # tp = 1: v on no chosen path; child enters either as tp=1 or with
        # its root on a path (shapes 2/7/8, reach ell seen from the child)
        for y1, s1 in pre1:
            for y2, s2 in ch1:
                if y1 & y2:
                    continue
                s = _combine(s1, s2, ell)
                if s is not None:
                    self._set_tp1(tab, v, d, y1 | y2, s,
                                  (y1, 1, s1, y2, 1, s2))
            for y2, tp2 in ch_on:
                if y1 & y2:
                    continue
                s = _combine(s1, ell, ell)
                if s is not None:
                    self._set_tp1(tab, v, d, y1 | y2, s,
                                  (y1, 1, s1, y2, tp2, ell))

        # tp >= 2: v's own family path, threaded through the SP sets
        fv = inst.fcolor[v]
        if not fv:
            return
        ybit = 1 << (fv - 1)
        prex = {tp: [(y, sp) for (y, t2, s), sp in prefix.items()
                     if t2 == tp and s == ell]
                for tp in range(2, 12)}
        chb = [(y, sp) for (y, t2, s), sp in child.items()
               if t2 in (3, 4, 5) and s == ell and y & ybit]
        for tp in range(2, 12):
            shape = self._shape_ids(v, d, tp)
            if not shape:
                continue
            for tp1 in CHAIN[tp]:
                for y1, sp1 in prex[tp1]:
                    if not y1 & ybit:
                        continue
                    base = sp1 & shape
                    if not base:
                        continue
                    if tp in A_TYPE:
                        for y2, s2 in ch1:
                            if y1 & y2:
                                continue
                            self._set_tpx(tab, v, d, y1 | y2, tp, base,
                                          (y1, tp1, self.ell, y2, 1, s2))
                    else:
                        for y2, sp2 in chb:
                            if y1 & y2 != ybit:
                                continue
                            sp = base & sp2
                            if sp:
                                # child tp recovered from bp when rebuilding
                                self._set_tpx(tab, v, d, y1 | y2, tp, sp,
                                              (y1, tp1, self.ell,
                                               y2, "B", self.ell))

    # -- answers and witnesses -------------------------------------------

    def accept_tree(self, ti: int):
        """Accepting root key of tree ti, or None."""
        tr = self.trees[ti]
        ymask = 0
        for j in self.assigned.get(ti, []):
            ymask |= 1 << j
        tab = self.tables[tr.root]
        ent = tab.entries[(tr.root, tr.deg(tr.root))]
        good = sorted(k for k in ent
                      if k[0] == ymask and k[1] in (1, 2, 7, 8) and k[2] >= 0)
        if not good:
            return None
        y, tp, s = good[0]
        return (tr.root, tr.deg(tr.root), y, tp, s)

    def rebuild(self, ti: int, key, chosen: dict) -> None:
        """Walk back-pointers from an accepting key, recording one concrete
        path index per family in `chosen`."""
        tr = self.trees[ti]
        tab = self.tables[tr.root]
        stack = [key + (None,) if len(key) == 5 else key]
        while stack:
            v, d, y, tp, s, q = stack.pop()
            if tp >= 2:
                if q is None:
                    q = min(tab.entries[(v, d)][(y, tp, s)])
                j, pi = q
                if chosen.setdefault(j, pi) != pi:
                    raise CpcInternalError("inconsistent witness for family")
            dec = tab.bp[(v, d, y, tp, s, q if tp >= 2 else None)]
            if dec == ("base",):
                continue
            y1, tp1, s1, y2, tp2, s2 = dec
            ch = tr.children[v][d - 1]
            if tp == 1:
                stack.append((v, d - 1, y1, 1, s1, None))
                if tp2 == 1:
                    stack.append((ch, tr.deg(ch), y2, 1, s2, None))
                else:
                    stack.append((ch, tr.deg(ch), y2, tp2, s2, None))
            else:
                stack.append((v, d - 1, y1, tp1, s1, q))
                if tp2 == 1:
                    stack.append((ch, tr.deg(ch), y2, 1, s2, None))
                else:
                    # same family path continues into the child
                    ck = self._find_child_b(tab, ch, tr.deg(ch), y2, q)
                    stack.append((ch, tr.deg(ch), y2, ck, self.ell, q))

    def _find_child_b(self, tab: TreeTables, ch, dch, y2, q) -> int:
        for tp2 in (3, 4, 5):
            sp = tab.entries[(ch, dch)].get((y2, tp2, self.ell))
            if sp and q in sp:
                return tp2
        raise CpcInternalError("lost the descending witness path")


def build_dp_tables(inst: CpcInstance) -> CpcTables:
    tabs = CpcTables(inst)
    tabs.fill()
    return tabs


def _solve_ell0(inst: CpcInstance):
    """ell = 0: every B vertex must lie on the chosen path of its own
    family (disjointness makes the families independent)."""
    need: list[set[int]] = [set() for _ in range(inst.t)]
    for b in inst.B:
        c = inst.fcolor[b]
        if c == 0:
            return None
        need[c - 1].add(b)
    chosen = []
    for j, fam in enumerate(inst.families):
        pick = next((p for p in fam.paths if need[j] <= set(p)), None)
        if pick is None:
            return None
        chosen.append(pick)
    return chosen


def cpc_solve(inst: CpcInstance, counters: dict | None = None):
    """One path per family covering B within ell, or None. Verified before
    being returned. `counters`, when given, accumulates "dp_entries"."""
    if inst.forest.n == 0:
        return [] if not inst.families and not inst.B else None
    if inst.ell == 0:
        result = _solve_ell0(inst)
    else:
        tabs = build_dp_tables(inst)
        if counters is not None:
            counters["dp_entries"] = counters.get("dp_entries", 0) + sum(
                len(ent) for tab in tabs.tables.values()
                for ent in tab.entries.values())
        chosen_idx: dict[int, int] = {}
        result = []
        for ti in range(len(tabs.trees)):
            key = tabs.accept_tree(ti)
            if key is None:
                result = None
                break
            tabs.rebuild(ti, key, chosen_idx)
        if result is not None:
            if sorted(chosen_idx) != list(range(inst.t)):
                raise CpcInternalError("witness misses a family")
            result = [inst.families[j].paths[chosen_idx[j]]
                      for j in range(inst.t)]
    if result is not None:
        dm = all_pairs_distances(inst.forest)
        for b in inst.B:
            if not any(_path_covers(dm, b, p, inst.ell) for p in result):
                raise CpcInternalError(f"returned paths leave {b} uncovered")
    return result


def dp_entry_semantics_check(inst: CpcInstance, tabs: CpcTables, ti: int,
                             key) -> bool:
    """Replay one true entry against the state definition: rebuild its
    witness, then verify shape, containment, and frontier semantics."""
    v, d, y, tp, s = key
    tr = tabs.trees[ti]
    tab = tabs.tables[tr.root]
    if (y, tp, s) not in tab.entries[(v, d)]:
        return False
    chosen: dict[int, int] = {}
    tabs.rebuild(ti, (v, d, y, tp, s), chosen)
    sub = set(tr.limited_subtree(v, d))
    dm = all_pairs_distances(inst.forest)
    paths = {j: inst.families[j].paths[pi] for j, pi in chosen.items()}
    # (1) exactly the families of Y, own-family path matches tp, containment
    if set(paths) != {j for j in range(inst.t) if y >> j & 1}:
        return False
    fv = inst.fcolor[v]
    for j, p in paths.items():
        if not (set(p) <= sub or (fv and j == fv - 1 and v in p)):
            return False
    if tp >= 2:
        if not fv or (fv - 1) not in paths or v not in paths[fv - 1]:
            return False
        p = paths[fv - 1]
        c1, c2 = _classify(tr, v, p[0]), _classify(tr, v, p[-1])
        if not _shape_ok(tp, c1, c2, d, len(p) == 1):
            return False
    else:
        if any(v in p for p in paths.values()):
            return False
    in_paths = [list(p) for p in paths.values()]
    covered = {u for u in sub
               if any(any(dm[u, w] <= inst.ell for w in p) for p in in_paths)}
    uncov = [u for u in sub & inst.B if u not in covered]
    if s < 0:
        eta = -1 - s
        if not uncov or max(dm[v, u] for u in uncov) != eta:
            return False
    else:
        if uncov:
            return False
        onpath = [dm[v, w] for p in in_paths for w in p if w in sub]
        if s == 0:
            if onpath and min(onpath) < inst.ell:
                return False
        elif not onpath or min(onpath) != inst.ell - s:
            return False
    return True

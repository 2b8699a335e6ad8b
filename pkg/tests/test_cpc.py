import json
import random

import pytest

from espath.cpc import (
    CpcBudgetError,
    CpcInstance,
    CpcInvariantError,
    FeasibleFamily,
    assign_families_to_trees,
    build_dp_tables,
    cpc_brute,
    cpc_solve,
    dp_entry_semantics_check,
)
from espath.graph import Graph, path_graph

from helpers import random_cpc_instance


def inst_p5(ell, paths, b):
    return CpcInstance(path_graph(5), b, ell, [FeasibleFamily(list(paths))])


def test_validation_rejects_cycle():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(CpcInvariantError):
        CpcInstance(g, set(), 1, [])


def test_validation_rejects_shared_vertex():
    g = path_graph(5)
    fams = [FeasibleFamily([(0, 1)]), FeasibleFamily([(1, 2)])]
    with pytest.raises(CpcInvariantError):
        CpcInstance(g, set(), 1, fams)


def test_validation_rejects_adjacent_families():
    # vertices 1 and 2 touch but belong to different families
    g = path_graph(5)
    fams = [FeasibleFamily([(0, 1)]), FeasibleFamily([(2, 3)])]
    with pytest.raises(CpcInvariantError):
        CpcInstance(g, set(), 1, fams)


def test_validation_rejects_family_spanning_trees():
    g = Graph(4, [(0, 1), (2, 3)])
    with pytest.raises(CpcInvariantError):
        CpcInstance(g, set(), 1, [FeasibleFamily([(0, 1), (2, 3)])])


def test_validation_rejects_non_path():
    g = path_graph(4)
    with pytest.raises(CpcInvariantError):
        CpcInstance(g, set(), 1, [FeasibleFamily([(0, 2)])])


def test_json_roundtrip():
    g = Graph(6, [(0, 1), (1, 2), (3, 4)])
    inst = CpcInstance(g, {2, 4}, 2,
                       [FeasibleFamily([(0, 1), (1, 2)], 0, 0),
                        FeasibleFamily([(4,)], 1, 1)])
    blob = json.dumps(inst.to_json())
    back = CpcInstance.from_json(json.loads(blob))
    assert back.to_json() == inst.to_json()
    assert back.B == inst.B and back.ell == inst.ell


def test_middle_path_covers_both_ends():
    inst = inst_p5(1, [(1, 2, 3)], {0, 4})
    assert cpc_solve(inst) == [(1, 2, 3)]
    assert cpc_brute(inst) == [(1, 2, 3)]


def test_single_vertex_choice_cannot_cover():
    inst = inst_p5(1, [(2,)], {0, 4})
    assert cpc_solve(inst) is None
    assert cpc_brute(inst) is None


def test_no_families():
    g = path_graph(3)
    assert cpc_solve(CpcInstance(g, set(), 1, [])) == []
    assert cpc_solve(CpcInstance(g, {0}, 0, [])) is None


def test_b_empty_any_selection_works():
    inst = inst_p5(1, [(0,), (4,)], set())
    got = cpc_solve(inst)
    assert got is not None and len(got) == 1


def test_ell0_needs_containment():
    inst = inst_p5(0, [(1, 2), (2, 3)], {3})
    assert cpc_solve(inst) == [(2, 3)]
    assert cpc_brute(inst) == [(2, 3)]
    inst2 = inst_p5(0, [(1, 2), (2, 3)], {1, 3})
    assert cpc_solve(inst2) is None


def test_ell0_uncolored_b_vertex():
    inst = inst_p5(0, [(1, 2)], {4})
    assert cpc_solve(inst) is None


def test_same_family_halves_cannot_be_glued():
    # one family, two far-apart candidate paths; each covers only one end
    g = path_graph(7)
    fam = FeasibleFamily([(0, 1, 2), (4, 5, 6)])
    assert cpc_solve(CpcInstance(g, {0, 6}, 1, [fam])) is None
    assert cpc_solve(CpcInstance(g, {6}, 1, [fam])) == [(4, 5, 6)]


def test_two_trees_independent():
    g = Graph(8, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)])
    fams = [FeasibleFamily([(1,), (2,)]), FeasibleFamily([(5,), (6,)])]
    inst = CpcInstance(g, {0, 7}, 1, fams)
    assert cpc_solve(inst) == [(1,), (6,)]
    assert cpc_brute(inst) == [(1,), (6,)]


def test_familyless_tree_with_b_vertex():
    g = Graph(5, [(0, 1), (2, 3), (3, 4)])
    inst = CpcInstance(g, {0}, 1, [FeasibleFamily([(3,)])])
    assert cpc_solve(inst) is None


def test_assign_families_to_trees():
    g = Graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    fams = [FeasibleFamily([(4,)]), FeasibleFamily([(0, 1)])]
    inst = CpcInstance(g, set(), 1, fams)
    assert assign_families_to_trees(inst) == {1: [0], 0: [1]}


def test_brute_budget():
    g = path_graph(30)
    paths = [(v,) for v in range(30)]
    fams = [FeasibleFamily(paths) for _ in range(5)]
    # 30^5 raw selections exceed a small budget before enumeration starts
    big = CpcInstance(g, set(), 1, [FeasibleFamily([(0,)])], validate=False)
    big.families = fams
    with pytest.raises(CpcBudgetError):
        cpc_brute(big, budget=10_000)


def test_deep_coverage_radius():
    # ell = 3 reaches the whole P7 from its centre
    g = path_graph(7)
    inst = CpcInstance(g, {0, 6}, 3, [FeasibleFamily([(3,), (0,)])])
    assert cpc_solve(inst) == [(3,)]


def test_entry_semantics_replay():
    rng = random.Random(31)
    seen = 0
    for _ in range(40):
        inst = random_cpc_instance(rng, n_max=10, t_max=2, ell_max=3)
        if inst.ell == 0:
            continue
        tabs = build_dp_tables(inst)
        for ti, tr in enumerate(tabs.trees):
            tab = tabs.tables[tr.root]
            keys = [(v, d, y, tp, s)
                    for (v, d), ent in tab.entries.items()
                    for (y, tp, s) in ent]
            rng.shuffle(keys)
            for key in keys[:12]:
                assert dp_entry_semantics_check(inst, tabs, ti, key), key
                seen += 1
    assert seen > 200


def test_differential_against_brute():
    rng = random.Random(97)
    agree = yes = 0
    for _ in range(600):
        inst = random_cpc_instance(rng, n_max=12, t_max=3, ell_max=4)
        want = cpc_brute(inst)
        got = cpc_solve(inst)
        assert (got is None) == (want is None), inst.to_json()
        agree += 1
        yes += got is not None
    assert agree == 600 and 0 < yes < 600

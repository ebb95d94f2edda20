import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from mldsurf import catalog, suites
from mldsurf.blowup import (BlowupTower, enumerate_divisors, ledger_matches_pullback, mld_bruteforce,
                            pullback_on_tower, resolve_pair, tower_dual_graph)
from mldsurf.cluster import BranchCluster, Site
from mldsurf.discrepancy import BoundaryBranch, GermModel
from mldsurf.dual_graph import WeightedDualGraph, structure


def smooth_with(*branches):
    return GermModel(WeightedDualGraph(), tuple(branches))


def cusp(c):
    return smooth_with(BoundaryBranch("C", c, Site(), BranchCluster.parse("2,1,1:^0")))


@pytest.mark.parametrize("c", [Q(1, 3), Q(5, 6), Q(1)])
def test_cusp_resolution_discrepancies(c):
    # the classical values for y^2 = x^3: a = 2 - 2c, 3 - 3c, 5 - 6c
    t = resolve_pair(cusp(c))
    assert t.depth == 3
    assert [t.log_discrepancy(e) for e in ("E1", "E2", "E3")] == [2 - 2 * c, 3 - 3 * c, 5 - 6 * c]
    assert ledger_matches_pullback(t)


def test_satellite_point_adds_the_two_discrepancies():
    t = BlowupTower.from_germ(smooth_with()).blow_up(0).blow_up("E1")
    t = t.blow_up(t.find_point("E1*E2"))
    assert [t.log_discrepancy(e) for e in ("E1", "E2", "E3")] == [2, 3, 5]


def test_cusp_tower_shape():
    t = resolve_pair(cusp(Q(1, 2)))
    g = tower_dual_graph(t)
    assert {v.id: v.weight for v in g.vertices if v.exceptional} == {"E1": 3, "E2": 2, "E3": 1}
    # the strict transform meets only the last curve, once
    assert {e: k for e, k in g.edges.items() if "C" in e} == {("C", "E3"): 1}
    assert not t.non_snc_points()


def test_new_curve_names_avoid_existing_ones():
    g = GermModel(WeightedDualGraph.build([("E1", 3)]))
    t = BlowupTower.from_germ(g).blow_up("E1")
    assert t.last_curve == "E'1"


def test_blowing_up_a_meeting_point_on_a2():
    t = BlowupTower.from_germ(GermModel(catalog.a_graph(2))).blow_up(0)
    assert t.log_discrepancy("E1") == 2
    assert t.curves["F1"].self_int == -3 and t.curves["F2"].self_int == -3
    assert ledger_matches_pullback(t)


def test_nodal_curve_loses_its_node():
    g = GermModel(WeightedDualGraph.build([("F", 2, 0, 1)]))
    t = BlowupTower.from_germ(g)
    (node,) = t.points
    t = t.blow_up(node)
    assert t.curves["F"].nodes == 0 and t.curves["F"].self_int == -6
    assert t.points_on("E1") and ledger_matches_pullback(t)


def test_find_point_specs():
    g = GermModel(catalog.a_graph(2), (BoundaryBranch("C", Q(1, 2), Site("on", ("F1",))),))
    t = BlowupTower.from_germ(g)
    assert t.find_point("F1*F2") == t.find_point("F2,F1")
    assert t.points[t.find_point("F1*C")] == ("F1",)
    assert t.find_point("F1") == "F1"
    with pytest.raises(ValueError):
        t.find_point("F1*F2*C")
    with pytest.raises(ValueError):
        t.find_point("origin")


def test_smooth_germ_without_boundary():
    divisors = list(enumerate_divisors(smooth_with(), 2))
    assert sorted(d.log_discrepancy for d in divisors) == [2, 3]
    search = mld_bruteforce(smooth_with(), 3)
    assert search.value == 2 and [d.label for d in search.argmin] == ["E1[origin]"]
    assert search.certified


def test_depth_must_be_positive():
    with pytest.raises(ValueError):
        mld_bruteforce(smooth_with(), 0)


def test_pruning_never_changes_the_minimizers():
    rng = random.Random(11)
    for _ in range(40):
        g = suites.random_smooth_germ(rng) if rng.random() < 0.6 else \
            suites.random_boundary_model(rng, rng.choice(list(catalog.ade_graphs(False).values())), plt=False)
        divisors = list(enumerate_divisors(g, 3))
        low = min(d.log_discrepancy for d in divisors)
        search = mld_bruteforce(g, 3)
        assert search.value == low
        assert sorted(d.label for d in search.argmin) == sorted(d.label for d in divisors
                                                                if d.log_discrepancy == low)


def test_minimum_over_resolved_germ_includes_base_curves():
    search = mld_bruteforce(catalog.bd12_d4(), 2)
    assert {d.label for d in search.argmin} == {"F1", "F2"}
    assert all(d.on_resolution for d in search.argmin)


def test_divisor_labels_record_the_path():
    t_divs = [d for d in enumerate_divisors(catalog.kawakita(), 2) if d.tower.depth == 2]
    assert "E2[origin*D > E1*D]" in {d.label for d in t_divs}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 5))
def test_ledger_agrees_with_full_solve(seed, depth):
    rng = random.Random(seed)
    g = suites.random_smooth_germ(rng, lc=False) if rng.random() < 0.5 else \
        suites.random_boundary_model(rng, rng.choice(list(catalog.ade_graphs(False).values())), plt=False)
    t = suites.random_tower(rng, g, depth)
    assert pullback_on_tower(t) == {c: t.curves[c].gamma for c in t.curves}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_resolution_is_log_smooth_and_minimizers_are_chains(seed):
    g = suites.random_smooth_germ(random.Random(seed))
    assert not resolve_pair(g).non_snc_points()
    for d in mld_bruteforce(g, 3).argmin:
        assert structure(d.dual_graph()).is_chain

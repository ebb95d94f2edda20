import random
from fractions import Fraction as Q

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from mldsurf import catalog, suites
from mldsurf.cluster import BranchCluster, Site
from mldsurf.discrepancy import (BoundaryBranch, GermModel, extraction_coefficients, fmt,
                                 is_klt_germ, kollar_component_status, mld_on_resolution,
                                 pair_status, parse_rational, residual, solve_discrepancies)
from mldsurf.dual_graph import WeightedDualGraph


def sympy_discrepancies(graph, bdot=None):
    """Independent solve: build M and K.F by hand and let sympy do the algebra."""
    ids = graph.ids
    n = len(ids)
    m = sympy.zeros(n, n)
    for i, v in enumerate(ids):
        m[i, i] = -graph.vertex(v).weight
    for (u, w), k in graph.edges.items():
        i, j = ids.index(u), ids.index(w)
        m[i, j] += k
        m[j, i] += k
    k_dot = [2 * graph.vertex(v).genus - 2 + graph.vertex(v).weight for v in ids]
    rhs = sympy.Matrix([-(k_dot[i] + sympy.Rational(str((bdot or {}).get(v, 0))))
                        for i, v in enumerate(ids)])
    gamma = m.LUsolve(rhs)
    return {v: Q(str(1 - gamma[i])) for i, v in enumerate(ids)}


def test_binary_dihedral_values():
    a = solve_discrepancies(catalog.bd12_d4())
    assert a.as_strings() == {"F1": "1/2", "F2": "1/2", "F3": "3/4", "F4": "3/4"}
    assert mld_on_resolution(catalog.bd12_d4()) == (Q(1, 2), ("F1", "F2"))


@pytest.mark.parametrize("n", [2, 3, 4, 7])
def test_single_curve_of_weight_n(n):
    # gamma (-n) = -(n - 2), so a = 2/n
    assert solve_discrepancies(GermModel(catalog.a_graph(1, n)))["F1"] == Q(2, n)


@pytest.mark.parametrize("name", ["A5", "D6", "E7"])
def test_weight_three_variants_against_sympy(name):
    g = catalog.ade_graphs(False)[name]
    assert solve_discrepancies(GermModel(g)).values == sympy_discrepancies(g)


def test_transverse_curve_lowers_a_linearly():
    for c in (Q(1, 3), Q(1, 2), Q(1)):
        b = BoundaryBranch("C", c, Site("on", ("F1",)))
        assert solve_discrepancies(GermModel(catalog.a_graph(1), (b,)))["F1"] == 1 - c / 2


def test_boundary_against_sympy():
    g = catalog.e_graph(6)
    b = BoundaryBranch("C", Q(1, 5), Site("on", ("F6",)), BranchCluster.parse("1,1:^F6"))
    germ = GermModel(g, (b,))
    assert solve_discrepancies(germ).values == sympy_discrepancies(g, {"F6": Q(2, 5)})


def test_zero_coefficients_are_dropped():
    b = BoundaryBranch("C", 0, Site("on", ("F1",)))
    assert GermModel(catalog.a_graph(2), (b,)).boundary == ()


@pytest.mark.parametrize("bad", [
    lambda: BoundaryBranch("C", Q(3, 2)),
    lambda: GermModel(WeightedDualGraph.build([("F1", 2), ("F2", 2)])),                     # disconnected
    lambda: GermModel(catalog.a_graph(2), (BoundaryBranch("C", Q(1, 2), Site()),)),         # origin on Y
    lambda: GermModel(WeightedDualGraph(), (BoundaryBranch("C", Q(1, 2), Site("on", ("F1",))),)),
    lambda: GermModel(catalog.a_graph(3), (BoundaryBranch("C", Q(1, 2), Site("meet", ("F1", "F3"))),)),
    lambda: GermModel(catalog.a_graph(2), (BoundaryBranch("F1", Q(1, 2), Site("on", ("F1",))),)),
    lambda: GermModel(catalog.a_graph(2), (BoundaryBranch("C", Q(1, 2), Site("on", ("F1",)),
                                                          BranchCluster.parse("1,1:^F2")),)),
])
def test_validation(bad):
    with pytest.raises(ValueError):
        bad()


def test_extraction_of_the_d4_fork():
    g = GermModel(catalog.d_graph(4))
    assert set(extraction_coefficients(g, "F2").values()) == {Q(1, 2)}
    assert tuple(kollar_component_status(g, "F2")) == (True, True)


def test_e6_tail_is_neither():
    g = GermModel(catalog.e_graph(6))
    assert tuple(kollar_component_status(g, "F1")) == (False, False)


def test_kollar_status_needs_klt():
    with pytest.raises(ValueError):
        kollar_component_status(catalog.h5(), "F0")


def test_kawakita_pair_relative_status():
    g = catalog.kawakita()
    from mldsurf.blowup import BlowupTower, extraction_status
    t = BlowupTower.from_germ(g).blow_up(0)
    assert tuple(extraction_status(t, "E1")) == (True, True)
    assert tuple(extraction_status(t, "E1", relative_to_pair=True)) == (False, False)


def test_pair_status_labels():
    assert pair_status(catalog.bd12_d4()).label == "klt"
    assert pair_status(catalog.d4_extraction_pair()).label == "lc"
    assert not is_klt_germ(catalog.h5())
    assert pair_status(catalog.h5()).lc
    node = BoundaryBranch("N", 1, Site(), BranchCluster.smooth())
    other = BoundaryBranch("M", 1, Site(), BranchCluster.smooth())
    st_ = pair_status(GermModel(WeightedDualGraph(), (node, other)))
    assert (st_.plt, st_.dlt, st_.label) == (False, True, "dlt")


def test_rational_rendering():
    assert fmt(1) == "1/1" and fmt(Q(-3, 6)) == "-1/2"
    assert parse_rational(" 2/3 ") == Q(2, 3)
    with pytest.raises(ValueError):
        parse_rational("0.5x")


graphs = st.sampled_from(sorted(catalog.ade_graphs(True).items()) + sorted(catalog.ade_graphs(False).items()))


@settings(max_examples=40, deadline=None)
@given(graphs, st.integers(0, 10 ** 6))
def test_residual_is_zero(named, seed):
    g = suites.random_boundary_model(random.Random(seed), named[1], plt=False)
    assert all(r == 0 for r in residual(g, solve_discrepancies(g)))


@settings(max_examples=40, deadline=None)
@given(graphs, st.integers(0, 10 ** 6), st.fractions(0, 1, max_denominator=8))
def test_raising_a_coefficient_never_raises_a(named, seed, bump):
    g = suites.random_boundary_model(random.Random(seed), named[1], plt=False)
    if not g.boundary:
        return
    b = g.boundary[0]
    raised = BoundaryBranch(b.name, min(Q(1), b.coeff + bump), b.site, b.cluster)
    h = GermModel(g.graph, (raised,) + g.boundary[1:])
    before, after = solve_discrepancies(g), solve_discrepancies(h)
    assert all(after[v] <= before[v] for v in g.ids)

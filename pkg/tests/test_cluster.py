from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from mldsurf.cluster import BranchCluster, Position, Site, dot_with_base_curve, local_intersection
from mldsurf.suites import euclid_cluster


def monomial_intersection(p, q, r, s):
    """(y^p - x^q . y^r - c x^s) at 0 for generic c, both tangent to y = 0.

    Substituting x = t^p, y = t^q into the second equation leaves
    t^(qr) - c t^(ps), whose order is min(qr, ps).
    """
    return min(q * r, p * s)


coprime_pairs = st.tuples(st.integers(1, 6), st.integers(2, 15)).filter(
    lambda pq: pq[0] < pq[1] and gcd(*pq) == 1)


def test_smooth_branches_with_high_contact():
    # y = x^3 against y = c x^3 shares the origin and the next two points
    assert local_intersection(euclid_cluster(1, 3, "t"), euclid_cluster(1, 3, "t")) == 3
    assert local_intersection(euclid_cluster(1, 3, "t"), euclid_cluster(1, 5, "t")) == 3


@settings(max_examples=150, deadline=None)
@given(coprime_pairs, coprime_pairs)
def test_noether_sum_matches_parametrisation(c1, c2):
    (p, q), (r, s) = c1, c2
    k1, k2 = euclid_cluster(p, q, "t"), euclid_cluster(r, s, "t")
    assert local_intersection(k1, k2) == monomial_intersection(p, q, r, s)


@settings(max_examples=60, deadline=None)
@given(coprime_pairs, coprime_pairs)
def test_different_tangents_meet_in_the_product_of_multiplicities(c1, c2):
    (p, q), (r, s) = c1, c2
    k1, k2 = euclid_cluster(p, q, "t"), euclid_cluster(r, s, "u")
    assert local_intersection(k1, k2) == p * r


@pytest.mark.parametrize("p, q, mults", [
    (2, 3, (2, 1, 1)),
    (2, 5, (2, 2, 1, 1)),
    (3, 4, (3, 1, 1, 1)),
    (3, 5, (3, 2, 1, 1)),
])
def test_euclid_multiplicities(p, q, mults):
    assert euclid_cluster(p, q).multiplicities == mults


def test_cusp_cluster_text_round_trip():
    c = BranchCluster.parse("2,1,1:^0")
    assert c == euclid_cluster(2, 3)
    assert BranchCluster.parse(str(c)) == c


def test_proximity_equality_is_enforced():
    with pytest.raises(ValueError):
        BranchCluster.parse("2,1")          # the cusp needs a second point on E_0
    with pytest.raises(ValueError):
        BranchCluster.parse("1,2")          # multiplicities never increase
    with pytest.raises(ValueError):
        BranchCluster.parse("2,1:^5,1")     # refers past the previous point


def test_base_curve_reference():
    c = BranchCluster((1, 1, 1), (Position.on("F1"), Position.on("F1")))
    assert c.base_refs() == {"F1"}
    assert dot_with_base_curve(c, Site("on", ("F1",)), "F1") == 3
    assert dot_with_base_curve(c, Site("on", ("F1",)), "F2") == 0


def test_node_site_counts_both_branches_of_the_curve():
    assert dot_with_base_curve(BranchCluster.smooth(), Site("node", ("F1",)), "F1") == 2


@pytest.mark.parametrize("text", ["origin", "on:F1", "on:F1~p", "meet:F1,F2", "node:F3"])
def test_site_round_trip(text):
    assert str(Site.parse(text)) == text


def test_bad_sites():
    for text in ("meet:F1", "meet:F1,F1", "wherever:F1", "F1"):
        with pytest.raises(ValueError):
            Site.parse(text)


def test_labelled_smooth_branches_share_their_tangent():
    t = BranchCluster((1, 1), (Position.free("t"),))
    assert local_intersection(t, t) == 2
    assert local_intersection(t, BranchCluster((1, 1), (Position.free("u"),))) == 1
    assert local_intersection(t, BranchCluster.smooth()) == 1

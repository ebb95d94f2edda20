"""Named germs: the ADE family and the worked examples."""
from __future__ import annotations

from fractions import Fraction

from .cluster import BranchCluster, Site
from .discrepancy import BoundaryBranch, GermModel
from .dual_graph import WeightedDualGraph


def _chain_edges(n: int):
    return [(f"F{i}", f"F{i + 1}") for i in range(1, n)]


def a_graph(m: int, first_weight: int = 2) -> WeightedDualGraph:
    ws = [first_weight] + [2] * (m - 1)
    return WeightedDualGraph.build([(f"F{i + 1}", w) for i, w in enumerate(ws)], _chain_edges(m))


def d_graph(m: int, fork_weight: int = 2) -> WeightedDualGraph:
    """F1 - ... - F(m-2) with F(m-1), F(m) hanging off the fork F(m-2)."""
    if m < 4:
        raise ValueError("D needs at least 4 curves")
    fork = f"F{m - 2}"
    vs = [(f"F{i}", fork_weight if f"F{i}" == fork else 2) for i in range(1, m + 1)]
    es = _chain_edges(m - 2) + [(fork, f"F{m - 1}"), (fork, f"F{m}")]
    return WeightedDualGraph.build(vs, es)


def e_graph(m: int, fork_weight: int = 2) -> WeightedDualGraph:
    """F1 - ... - F(m-1) with F(m) hanging off the fork F3."""
    if m not in (6, 7, 8):
        raise ValueError("E needs 6, 7 or 8 curves")
    vs = [(f"F{i}", fork_weight if i == 3 else 2) for i in range(1, m + 1)]
    return WeightedDualGraph.build(vs, _chain_edges(m - 1) + [("F3", f"F{m}")])


def ade_graphs(du_val: bool = True) -> dict[str, WeightedDualGraph]:
    """A1..A9, D4..D9, E6..E8; the non-Du-Val variant puts weight 3 on F1 (A) or on the fork."""
    w = 2 if du_val else 3
    out = {}
    for m in range(1, 10):
        out[f"A{m}"] = a_graph(m, w)
    for m in range(4, 10):
        out[f"D{m}"] = d_graph(m, w)
    for m in (6, 7, 8):
        out[f"E{m}"] = e_graph(m, w)
    return out


def bd12_d4() -> GermModel:
    """D4 with the tail F1 of weight 3: a binary dihedral quotient with mld 1/2."""
    g = WeightedDualGraph.build([("F1", 3), ("F2", 2), ("F3", 2), ("F4", 2)],
                                [("F1", "F2"), ("F2", "F3"), ("F2", "F4")])
    return GermModel(g, (), "bd12_d4")


def kawakita() -> GermModel:
    """Smooth germ with 2/3 of a cusp whose later points are in general position."""
    b = BoundaryBranch("D", Fraction(2, 3), Site(), BranchCluster.parse("2,1,1:^0"))
    return GermModel(WeightedDualGraph(), (b,), "kawakita")


def h5() -> GermModel:
    g = WeightedDualGraph.build([("F0", 3), ("F1", 2), ("F2", 2), ("F3", 2), ("F4", 2)],
                                [("F0", f"F{i}") for i in range(1, 5)])
    return GermModel(g, (), "h5")


def a1_weight3() -> GermModel:
    return GermModel(a_graph(1, 3), (), "a1_weight3")


def d4_extraction_pair() -> GermModel:
    """A3 with a coefficient-1 curve through the middle curve F1 (extraction of a D4 tail)."""
    g = WeightedDualGraph.build([("F1", 2), ("F2", 2), ("F3", 2)], [("F2", "F1"), ("F1", "F3")])
    b = BoundaryBranch("C", Fraction(1), Site("on", ("F1",)))
    return GermModel(g, (b,), "d4_extraction_pair")


def examples() -> dict[str, GermModel]:
    out = {}
    for name, g in ade_graphs(True).items():
        key = f"{name.lower()}_duval"
        out[key] = GermModel(g, (), key)
    for name, g in ade_graphs(False).items():
        key = f"{name.lower()}_weight3"
        out[key] = GermModel(g, (), key)
    for make in (bd12_d4, kawakita, h5, a1_weight3, d4_extraction_pair):
        g = make()
        out[g.name] = g
    return out


def fixtures() -> dict[str, GermModel]:
    """The germs shipped as ``fixtures/*.germ``: Du Val ADE plus the worked examples."""
    return {k: g for k, g in examples().items() if not k.endswith("_weight3") or k == "a1_weight3"}

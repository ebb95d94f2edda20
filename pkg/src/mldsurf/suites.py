"""Seeded random germs and the property suites run by ``mldsurf verify``.

Every suite takes a ``random.Random`` and a case count, and returns a
``SuiteResult`` whose failures carry a germ spec that replays the case.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Optional

from . import spec_format
from .blowup import (BlowupTower, ledger_matches_pullback, mld_bruteforce,
                     tower_dual_graph)
from .catalog import ade_graphs, d_graph, e_graph, examples
from .classifier import verify_theorem
from .cluster import BranchCluster, Position, Site, local_intersection
from .discrepancy import BoundaryBranch, GermModel, pair_status, solve_discrepancies
from .dual_graph import (WeightedDualGraph, classify_graph, intersection_matrix, is_negative_definite,
                         structure)


# -- random clusters ---------------------------------------------------------------

def euclid_cluster(p: int, q: int, label: Optional[str] = None) -> BranchCluster:
    """Cluster of the branch y^p = x^q (coprime, p < q) read off Euclid's algorithm.

    Its free points are the origins of successive x-charts.  With a label they
    are shared with every other branch carrying the same label, so two such
    clusters meet as the monomial curves y^p = x^q and y^r = c x^s do.
    Without one they are in general position.
    """
    if p == 1:
        if label is None:
            return BranchCluster.smooth()
        return BranchCluster((1,) * q, (Position.free(label),) * (q - 1))
    if not (1 < p < q and gcd(p, q) == 1):
        raise ValueError("need coprime 1 < p < q")
    blocks = []           # (multiplicity, length)
    a, b, mult = q, p, p
    while b:
        blocks.append((mult, a // b))
        a, b = b, a % b
        mult = b if b else mult
    mults: list[int] = []
    starts: list[int] = []
    for m, length in blocks:
        starts.append(len(mults))
        mults.extend([m] * length)
    lasts = [s + n - 1 for s, (_, n) in zip(starts, blocks)]
    pos: list[Position] = []
    for k in range(1, len(mults)):
        blk = max(i for i, s in enumerate(starts) if s <= k)
        if blk == 0 or (blk == 1 and k == starts[1]):
            pos.append(Position.free(label))
        elif k == starts[blk]:
            pos.append(Position.on(lasts[blk - 2]))
        else:
            pos.append(Position.on(lasts[blk - 1]))
    return BranchCluster(tuple(mults), tuple(pos))


def random_cluster(rng: random.Random, label_pool=("t", "u"), max_p: int = 4) -> BranchCluster:
    roll = rng.random()
    label = rng.choice(label_pool + (None,)) if label_pool else None
    if roll < 0.45:
        n = rng.randint(0, 3)
        if n == 0 or label is None:
            return BranchCluster.smooth()
        ps = [Position.free(label)] + [Position.free(rng.choice(("s", None))) for _ in range(n - 1)]
        return BranchCluster((1,) * (n + 1), tuple(ps))
    p = rng.randint(2, max_p)
    q = rng.choice([k for k in range(p + 1, 3 * p + 1) if gcd(k, p) == 1])
    return euclid_cluster(p, q, label)


def random_coeff(rng: random.Random, allow_one: bool = True) -> Fraction:
    d = rng.randint(2, 7)
    k = rng.randint(1, d if allow_one else d - 1)
    return Fraction(k, d)


# -- random germs ---------------------------------------------------------------------

def random_smooth_germ(rng: random.Random, max_branches: int = 3, lc: bool = True) -> GermModel:
    """Smooth germ with branches through the origin; retried until lc when asked."""
    while True:
        n = rng.randint(1, max_branches)
        bs = tuple(BoundaryBranch(f"B{i + 1}", random_coeff(rng), Site(), random_cluster(rng))
                   for i in range(n))
        g = GermModel(WeightedDualGraph(), bs)
        if not lc or pair_status(g).lc:
            return g


def random_branch(rng: random.Random, graph: WeightedDualGraph, name: str, coeff: Fraction) -> BoundaryBranch:
    ids = graph.ids
    edges = list(graph.edges)
    roll = rng.random()
    if edges and roll < 0.25:
        u, w = rng.choice(edges)
        return BoundaryBranch(name, coeff, Site("meet", (u, w)))
    f = rng.choice(ids)
    site = Site("on", (f,), rng.choice(("p", None)))
    r = rng.random()
    if r < 0.2:
        cluster = BranchCluster((1, 1), (Position.on(f),))
    elif r < 0.3:
        cluster = euclid_cluster(2, 3)
    elif r < 0.4:
        cluster = BranchCluster((1, 1), (Position.free("t"),))
    else:
        cluster = BranchCluster.smooth()
    return BoundaryBranch(name, coeff, site, cluster)


def random_boundary_model(rng: random.Random, graph: WeightedDualGraph, max_branches: int = 3,
                          plt: bool = True, name: str = "") -> GermModel:
    """Random boundary on a fixed graph, retried until plt (or lc) as requested."""
    for attempt in range(1000):
        n = rng.randint(0 if not plt else 1, max_branches)
        # shrink coefficients as retries pile up; graphs with tiny discrepancies need it
        scale = Fraction(1, 2 ** (attempt // 2))
        bs = tuple(random_branch(rng, graph, f"B{i + 1}",
                                 random_coeff(rng, allow_one=not plt or rng.random() < 0.3) * scale)
                   for i in range(n))
        g = GermModel(graph, bs, name)
        st = pair_status(g)
        if (plt and st.plt) or (not plt and st.lc):
            return g
    raise RuntimeError("no admissible boundary found")


def random_de_graph(rng: random.Random) -> WeightedDualGraph:
    """A klt graph of type D or E with random weights."""
    while True:
        if rng.random() < 0.5:
            g = d_graph(rng.randint(4, 9))
        else:
            g = e_graph(rng.choice((6, 7, 8)))
        for v in g.ids:
            if rng.random() < 0.3:
                g = g.with_weight(v, rng.randint(3, 4))
        if classify_graph(g).tag in ("D", "E"):
            return g


def random_tower(rng: random.Random, g: GermModel, depth: int) -> BlowupTower:
    t = BlowupTower.from_germ(g)
    for _ in range(depth):
        targets = sorted(t.points) + list(t.curves)
        t = t.blow_up(rng.choice(targets))
    return t


# -- suites -------------------------------------------------------------------------------

@dataclass
class Failure:
    case: int
    message: str
    spec: str = ""


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, case: int, message: str, g: Optional[GermModel] = None):
        self.failures.append(Failure(case, message, spec_format.serialize(g) if g is not None else ""))


def _random_germ(rng: random.Random) -> GermModel:
    if rng.random() < 0.4:
        return random_smooth_germ(rng, lc=False)
    graph = rng.choice(list(ade_graphs(rng.random() < 0.7).values()))
    return random_boundary_model(rng, graph, plt=False)


def ledger_vs_pullback(rng: random.Random, cases: int) -> SuiteResult:
    res = SuiteResult("ledger_vs_pullback")
    for i in range(cases):
        g = _random_germ(rng)
        t = random_tower(rng, g, rng.randint(1, 5))
        res.cases += 1
        if not ledger_matches_pullback(t):
            res.fail(i, "ledger coefficients differ from the pullback solve", g)
        m = intersection_matrix(tower_dual_graph(t, with_boundary=False))
        if not is_negative_definite(m):
            res.fail(i, "tower intersection matrix is not negative definite", g)
        if t.curves[t.last_curve].self_int != -1:
            res.fail(i, "newest curve does not have self-intersection -1", g)
    return res


def intersection_conservation(rng: random.Random, cases: int) -> SuiteResult:
    res = SuiteResult("intersection_conservation")
    for i in range(cases):
        bs = tuple(BoundaryBranch(f"B{k + 1}", Fraction(1, 2), Site(), random_cluster(rng)) for k in range(2))
        g = GermModel(WeightedDualGraph(), bs)
        t = BlowupTower.from_germ(g)
        res.cases += 1
        if t.branch_intersection("B1", "B2") != local_intersection(bs[0].cluster, bs[1].cluster):
            res.fail(i, "tower intersection differs from the Noether sum on the base", g)
            continue
        for _ in range(rng.randint(1, 5)):
            before = t.branch_intersection("B1", "B2")
            b1, b2 = t.branches["B1"], t.branches["B2"]
            if b1.point == b2.point and rng.random() < 0.8:
                target = b1.point
            else:
                target = rng.choice(sorted(t.points) + list(t.curves))
            together = b1.point == b2.point == target
            product = b1.mult * b2.mult if together else 0
            mults = {b.name: b.mult for b in (b1, b2) if b.point == target}
            t = t.blow_up(target)
            after = t.branch_intersection("B1", "B2")
            if before != after + product:
                res.fail(i, f"(C.D) {before} != {after} + {product} after blowing up", g)
                break
            # the strict transform meets the new curve in the old multiplicity
            e = t.last_curve
            off = [n for n, m in mults.items() if t.branch_dot_curve(n, e) != m]
            if off:
                res.fail(i, f"{off[0]} . {e} differs from its multiplicity", g)
                break
    return res


def multiplicity_bound(rng: random.Random, cases: int) -> SuiteResult:
    res = SuiteResult("multiplicity_bound")
    for i in range(cases):
        c1, c2 = random_cluster(rng), random_cluster(rng)
        res.cases += 1
        k = local_intersection(c1, c2)
        if k < c1.mult(0) * c2.mult(0) or k != local_intersection(c2, c1):
            g = GermModel(WeightedDualGraph(), (BoundaryBranch("B1", Fraction(1, 2), Site(), c1),
                                                 BoundaryBranch("B2", Fraction(1, 2), Site(), c2)))
            res.fail(i, f"(B.C) = {k} below mult product {c1.mult(0) * c2.mult(0)}", g)
    return res


def _random_plt_de(rng: random.Random) -> GermModel:
    return random_boundary_model(rng, random_de_graph(rng), plt=True)


def fork_minimality(rng: random.Random, cases: int) -> SuiteResult:
    res = SuiteResult("fork_minimality")
    for i in range(cases):
        g = _random_plt_de(rng)
        fork = structure(g.graph).forks[0]
        a = solve_discrepancies(g)
        res.cases += 1
        worse = [v for v in g.ids if a[v] < a[fork]]
        if worse:
            res.fail(i, f"a({worse[0]}) < a(fork {fork})", g)
    return res


def confinement(rng: random.Random, cases: int) -> SuiteResult:
    res = SuiteResult("confinement")
    for i in range(cases):
        g = _random_plt_de(rng)
        a = solve_discrepancies(g)
        low = min(a.values.values())
        res.cases += 1
        # pruning only skips points whose divisors all have a > best <= low
        search = mld_bruteforce(g, 3)
        if search.value < low:
            d = search.argmin[0]
            res.fail(i, f"{d.label} has a = {d.log_discrepancy} below the resolution minimum {low}", g)
    return res


def chain_property(rng: random.Random, cases: int, depth: int = 4) -> SuiteResult:
    res = SuiteResult("chain_property")
    for i in range(cases):
        g = random_smooth_germ(rng)
        search = mld_bruteforce(g, depth)
        res.cases += 1
        for d in search.argmin:
            if not structure(d.dual_graph()).is_chain:
                res.fail(i, f"minimizer {d.label} has a non-chain tower", g)
                break
    return res


def theorem14(rng: random.Random, cases: int) -> SuiteResult:
    res = SuiteResult("theorem14")
    pool = list(examples().values())
    graphs = list(ade_graphs(True).values()) + list(ade_graphs(False).values())
    for i in range(cases):
        roll = rng.random()
        if roll < 0.2:
            g = rng.choice(pool)
        elif roll < 0.4:
            g = random_smooth_germ(rng)
        elif roll < 0.8:
            g = random_boundary_model(rng, rng.choice(graphs), plt=True)
        else:
            g = random_boundary_model(rng, rng.choice(graphs), plt=False)
        res.cases += 1
        v = verify_theorem(g)
        if not v.passed:
            res.fail(i, "; ".join(v.counterexample), g)
    return res


LEMMA_SUITES: dict[str, Callable] = {
    "ledger_vs_pullback": ledger_vs_pullback,
    "intersection_conservation": intersection_conservation,
    "multiplicity_bound": multiplicity_bound,
    "fork_minimality": fork_minimality,
    "confinement": confinement,
    "chain_property": chain_property,
}


def run(suite: str, seed: int = 0, cases: int = 200) -> list[SuiteResult]:
    if suite == "lemmas":
        names = list(LEMMA_SUITES)
    elif suite == "theorem14":
        names = ["theorem14"]
    elif suite == "all":
        names = list(LEMMA_SUITES) + ["theorem14"]
    else:
        raise ValueError(f"unknown suite {suite!r}")
    out = []
    for n in names:
        fn = theorem14 if n == "theorem14" else LEMMA_SUITES[n]
        out.append(fn(random.Random(f"{seed}:{n}"), cases))
    return out

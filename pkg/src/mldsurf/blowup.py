"""Combinatorial point blow-ups over a surface germ.

A tower starts from the minimal resolution Y of a germ (or from the smooth
germ itself) and records, for the current model:

* every tracked curve with its self-intersection and its coefficient
  ``gamma = 1 - a(F, X, B)`` in the crepant pullback of ``K_X + B``;
* the special points, each as the tuple of curves through it (a node of a
  curve lists that curve twice);
* every boundary branch: which point it sits at and how far along its
  cluster it has moved.

Blowing up a point ``p`` creates a curve ``E`` with self-intersection -1 and

    gamma(E) = sum of gamma(C) * mult_p(C) + sum of coeff * mult_p(branch) - 1

which is ``a(E) = 2 - mult_p(Delta)`` for the sub-boundary on the model.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Optional, Union

from .cluster import BranchCluster
from .discrepancy import (ExtractionStatus, GermModel, PairStatus, pullback_coefficients,
                          solve_discrepancies, status_from_coefficients)
from .dual_graph import Vertex, WeightedDualGraph, intersection_matrix

Target = Union[int, str]   # a point id, or a curve name meaning a general point of it


@dataclass(frozen=True)
class Curve:
    self_int: int
    gamma: Fraction
    genus: int = 0
    nodes: int = 0
    base: bool = False

    @property
    def log_discrepancy(self) -> Fraction:
        return 1 - self.gamma

    def canonical_degree(self) -> int:
        return 2 * (self.genus + self.nodes) - 2 - self.self_int


@dataclass(frozen=True)
class BranchState:
    name: str
    coeff: Fraction
    cluster: BranchCluster
    index: int          # position along the cluster of the point it sits at
    point: int
    created: tuple = ()  # (cluster index, curve) for every blow-up on this branch

    @property
    def mult(self) -> int:
        return self.cluster.mult(self.index)

    def next_position(self):
        return self.cluster.position(self.index + 1)


@dataclass(frozen=True)
class Step:
    point: int
    through: tuple      # curves through the point, with repetition
    branches: tuple     # branch names through the point
    curve: str          # the new exceptional curve


class BlowupTower:
    """Immutable state of a sequence of blow-ups; ``blow_up`` returns a new tower."""

    __slots__ = ("germ", "curves", "points", "branches", "steps", "next_pid", "prefix")

    def __init__(self, germ, curves, points, branches, steps, next_pid, prefix):
        self.germ: GermModel = germ
        self.curves: dict[str, Curve] = curves
        self.points: dict[int, tuple] = points
        self.branches: dict[str, BranchState] = branches
        self.steps: tuple[Step, ...] = steps
        self.next_pid: int = next_pid
        self.prefix: str = prefix

    # -- construction ----------------------------------------------------------
    @classmethod
    def from_germ(cls, g: GermModel) -> "BlowupTower":
        curves: dict[str, Curve] = {}
        points: dict[int, tuple] = {}
        branches: dict[str, BranchState] = {}
        pid = 0
        if g.is_smooth:
            points[0] = ()
            pid = 1
            for b in g.boundary:
                branches[b.name] = BranchState(b.name, b.coeff, b.cluster, 0, 0)
        else:
            vec = solve_discrepancies(g)
            for v in g.graph.vertices:
                curves[v.id] = Curve(-v.weight, 1 - vec[v.id], v.genus, v.node_count, True)
            first_meet: dict = {}
            for (u, w), k in g.graph.edges.items():
                for _ in range(k):
                    first_meet.setdefault((u, w), pid)
                    points[pid] = (u, w)
                    pid += 1
            first_node: dict = {}
            for v in g.graph.vertices:
                for _ in range(v.node_count):
                    first_node.setdefault(v.id, pid)
                    points[pid] = (v.id, v.id)
                    pid += 1
            labelled: dict = {}
            for b in g.boundary:
                s = b.site
                if s.kind == "meet":
                    at = first_meet[tuple(sorted(s.curves))]
                elif s.kind == "node":
                    at = first_node[s.curves[0]]
                elif s.label is not None and (s.curves[0], s.label) in labelled:
                    at = labelled[(s.curves[0], s.label)]
                else:
                    at = pid
                    points[pid] = (s.curves[0],)
                    pid += 1
                    if s.label is not None:
                        labelled[(s.curves[0], s.label)] = at
                branches[b.name] = BranchState(b.name, b.coeff, b.cluster, 0, at)
        taken = set(curves) | set(branches)
        prefix = "E"
        while any(re.fullmatch(re.escape(prefix) + r"\d+", n) for n in taken):
            prefix += "'"
        return cls(g, curves, points, branches, (), pid, prefix)

    # -- queries ------------------------------------------------------------------
    @property
    def depth(self) -> int:
        return len(self.steps)

    @property
    def last_curve(self) -> Optional[str]:
        return self.steps[-1].curve if self.steps else None

    def exceptional_curves(self) -> list[str]:
        return list(self.curves)

    def gamma(self, curve: str) -> Fraction:
        return self.curves[curve].gamma

    def log_discrepancy(self, curve: str) -> Fraction:
        return self.curves[curve].log_discrepancy

    def branches_at(self, pid: int) -> list[BranchState]:
        return [b for b in self.branches.values() if b.point == pid]

    def points_on(self, curve: str) -> list[int]:
        return [p for p, cs in self.points.items() if curve in cs]

    def describe_point(self, target: Target) -> str:
        if isinstance(target, str):
            return f"{target}~general"
        names = list(self.points[target]) + [b.name for b in self.branches_at(target)]
        if target == 0 and self.germ.is_smooth:
            names.insert(0, "origin")
        return "*".join(names)

    def _resolve_ref(self, b: BranchState, ref) -> Optional[str]:
        if isinstance(ref, str):
            return ref
        return dict(b.created).get(ref)

    def branch_dot_curve(self, name: str, curve: str) -> int:
        """Local intersection of a branch with a tracked curve at the branch's point."""
        b = self.branches[name]
        occ = self.points[b.point].count(curve)
        if not occ:
            return 0
        total = occ * b.mult
        k = b.index + 1
        while True:
            pos = b.cluster.position(k)
            if pos is None or pos.ref is None or self._resolve_ref(b, pos.ref) != curve:
                return total
            total += b.cluster.mult(k)
            k += 1

    def branch_intersection(self, n1: str, n2: str) -> int:
        """Noether sum for two boundary branches on the current model."""
        b1, b2 = self.branches[n1], self.branches[n2]
        if b1.point != b2.point:
            return 0
        tok1, tok2 = dict(b1.created), dict(b2.created)
        k1, k2 = b1.index, b2.index
        total = b1.cluster.mult(k1) * b2.cluster.mult(k2)
        step = 0
        while True:
            tok1[k1] = tok2[k2] = ("virtual", step)
            p1, p2 = b1.cluster.position(k1 + 1), b2.cluster.position(k2 + 1)
            if p1 is None or p2 is None:
                return total
            if p1.is_free:
                shared = p2.is_free and p1.label is not None and p1.label == p2.label
            else:
                r1 = p1.ref if isinstance(p1.ref, str) else tok1.get(p1.ref)
                r2 = p2.ref if isinstance(p2.ref, str) else tok2.get(p2.ref)
                shared = p2.ref is not None and r1 == r2
            if not shared:
                return total
            k1, k2, step = k1 + 1, k2 + 1, step + 1
            total += b1.cluster.mult(k1) * b2.cluster.mult(k2)

    def boundary_dot(self, curve: str) -> Fraction:
        return sum((b.coeff * self.branch_dot_curve(b.name, curve) for b in self.branches.values()),
                   Fraction(0))

    def is_snc_at(self, pid: int) -> bool:
        through = self.points[pid]
        here = self.branches_at(pid)
        if len(through) + len(here) >= 3:
            return False
        labels = set()
        for b in here:
            if b.mult > 1:
                return False
            pos = b.next_position()
            if pos is None:
                continue
            if pos.ref is not None:
                return False
            if pos.label is not None:
                if pos.label in labels:
                    return False
                labels.add(pos.label)
        return True

    def non_snc_points(self) -> list[int]:
        return [p for p in sorted(self.points) if not self.is_snc_at(p)]

    # -- the blow-up ----------------------------------------------------------------
    def find_point(self, spec: str) -> Target:
        """Point from a text spec.

        ``origin``; a single curve name (a general point of it); ``#3`` (point
        id); or names of curves and branches joined by ``*`` or ``,`` meaning
        the unique point they all pass through.
        """
        spec = spec.strip()
        if spec.startswith("#"):
            pid = int(spec[1:])
            if pid not in self.points:
                raise ValueError(f"no point #{pid}")
            return pid
        if spec == "origin" or spec.startswith("origin*"):
            if not self.germ.is_smooth or self.steps:
                raise ValueError("'origin' only names the point of an unblown smooth germ")
            return 0
        names = [n for n in re.split(r"[*,]", spec) if n]
        if len(names) == 1 and names[0] in self.curves:
            return names[0]
        for n in names:
            if n not in self.curves and n not in self.branches:
                raise ValueError(f"unknown curve or branch {n!r}")
        hits = [p for p in sorted(self.points)
                if all(n in self.points[p] or self.branches.get(n, None) is not None
                       and self.branches[n].point == p for n in names)]
        if len(hits) != 1:
            raise ValueError(f"{spec!r} matches {len(hits)} points")
        return hits[0]

    def blow_up(self, target: Target) -> "BlowupTower":
        if isinstance(target, str):
            if target not in self.curves:
                raise ValueError(f"unknown curve {target!r}")
            points = dict(self.points)
            pid = self.next_pid
            points[pid] = (target,)
            base = BlowupTower(self.germ, self.curves, points, self.branches, self.steps,
                               pid + 1, self.prefix)
            return base.blow_up(pid)
        if target not in self.points:
            raise ValueError(f"no point {target!r} on the current model")
        through = self.points[target]
        here = self.branches_at(target)
        name = f"{self.prefix}{len(self.steps) + 1}"
        gamma = (sum((self.curves[c].gamma for c in through), Fraction(0))
                 + sum((b.coeff * b.mult for b in here), Fraction(0)) - 1)
        curves = dict(self.curves)
        counts: dict[str, int] = {}
        for c in through:
            counts[c] = counts.get(c, 0) + 1
        for c, k in counts.items():
            old = curves[c]
            curves[c] = replace(old, self_int=old.self_int - k * k, nodes=old.nodes - (1 if k == 2 else 0))
        curves[name] = Curve(-1, gamma)
        points = dict(self.points)
        del points[target]
        pid = self.next_pid
        meets: dict[str, int] = {}
        for c in through:
            points[pid] = (name, c)
            meets.setdefault(c, pid)
            pid += 1
        branches = dict(self.branches)
        by_label: dict[str, int] = {}
        for b in here:
            created = b.created + ((b.index, name),)
            pos = b.next_position()
            if pos is None or (pos.is_free and pos.label is None):
                at = pid
                points[pid] = (name,)
                pid += 1
            elif pos.is_free:
                if pos.label not in by_label:
                    by_label[pos.label] = pid
                    points[pid] = (name,)
                    pid += 1
                at = by_label[pos.label]
            else:
                curve = pos.ref if isinstance(pos.ref, str) else dict(created).get(pos.ref)
                if curve not in counts:
                    raise ValueError(f"branch {b.name}: next point lies on {curve}, "
                                     "which does not pass through the blown-up point")
                if counts[curve] > 1:
                    raise ValueError(f"branch {b.name}: tangency to a nodal curve is ambiguous")
                at = meets[curve]
            branches[b.name] = BranchState(b.name, b.coeff, b.cluster, b.index + 1, at, created)
        step = Step(target, through, tuple(b.name for b in here), name)
        return BlowupTower(self.germ, curves, points, branches, self.steps + (step,), pid, self.prefix)

    def blow_up_all(self, targets) -> "BlowupTower":
        t = self
        for x in targets:
            t = t.blow_up(t.find_point(x) if isinstance(x, str) and x not in t.curves else x)
        return t


# -- derived data ----------------------------------------------------------------

def tower_dual_graph(t: BlowupTower, with_boundary: bool = True) -> WeightedDualGraph:
    """Dual graph of the current model; boundary branches become non-exceptional vertices."""
    vs = [Vertex(c, -s.self_int, s.genus, s.nodes) for c, s in t.curves.items()]
    edges: dict = {}
    for through in t.points.values():
        distinct = sorted(set(through))
        for i, u in enumerate(distinct):
            for w in distinct[i + 1:]:
                edges[(u, w)] = edges.get((u, w), 0) + 1
    if with_boundary:
        names = list(t.branches)
        for n in names:
            vs.append(Vertex(n, None, exceptional=False))
            for c in t.curves:
                k = t.branch_dot_curve(n, c)
                if k:
                    edges[(c, n) if c < n else (n, c)] = k
        for i, n in enumerate(names):
            for m in names[i + 1:]:
                k = t.branch_intersection(n, m)
                if k:
                    edges[(n, m) if n < m else (m, n)] = k
    return WeightedDualGraph(tuple(vs), edges)


def _tower_system(t: BlowupTower, include_boundary: bool):
    g = tower_dual_graph(t, with_boundary=False)
    ids = g.ids
    m = intersection_matrix(g, ids)
    canonical = {c: t.curves[c].canonical_degree() for c in ids}
    bdot = {c: t.boundary_dot(c) for c in ids} if include_boundary else {}
    return ids, m, canonical, bdot


def pullback_on_tower(t: BlowupTower) -> dict[str, Fraction]:
    """Coefficients from solving the full pullback system on the tower's graph."""
    ids, m, canonical, bdot = _tower_system(t, True)
    return pullback_coefficients(ids, m, canonical, bdot)


def ledger_matches_pullback(t: BlowupTower) -> bool:
    solved = pullback_on_tower(t)
    return all(solved[c] == t.curves[c].gamma for c in t.curves)


def resolve_pair(g: Union[GermModel, BlowupTower]) -> BlowupTower:
    """Blow up non-SNC points (lowest id first) until the configuration is log smooth."""
    t = g if isinstance(g, BlowupTower) else BlowupTower.from_germ(g)
    while True:
        bad = t.non_snc_points()
        if not bad:
            return t
        t = t.blow_up(bad[0])


def status_on_resolution(t: BlowupTower) -> PairStatus:
    gammas = [c.gamma for c in t.curves.values()]
    coeffs = [b.coeff for b in t.branches.values()]
    lc = all(x <= 1 for x in gammas)
    klt = lc and all(x < 1 for x in gammas) and all(c < 1 for c in coeffs)
    ones = [b for b in t.branches.values() if b.coeff == 1]
    touching = any(a.point == b.point for i, a in enumerate(ones) for b in ones[i + 1:])
    plt = lc and all(x < 1 for x in gammas) and not touching
    log_smooth = t.germ.is_smooth and not BlowupTower.from_germ(t.germ).non_snc_points()
    dlt = plt or (lc and log_smooth)
    return PairStatus(klt, plt, dlt, lc, t.depth)


def extraction_status(t: BlowupTower, curve: str, relative_to_pair: bool = False) -> ExtractionStatus:
    """Kollár / potential-lc-place test for a curve of a tower by its pinned system."""
    if relative_to_pair:
        t = resolve_pair(t)
    ids, m, canonical, bdot = _tower_system(t, relative_to_pair)
    sol = pullback_coefficients(ids, m, canonical, bdot, {curve: Fraction(1)})
    st = status_from_coefficients(c for k, c in sol.items() if k != curve)
    kollar = st.is_kollar and not t.curves[curve].nodes
    if relative_to_pair:
        kollar = kollar and all(b.coeff < 1 for b in t.branches.values())
    return ExtractionStatus(kollar, st.is_potential_lc_place)


# -- divisors over the germ -------------------------------------------------------

@dataclass(frozen=True)
class DivisorOverGerm:
    tower: BlowupTower = field(repr=False, compare=False)
    curve: str
    log_discrepancy: Fraction
    path: tuple = ()

    @property
    def on_resolution(self) -> bool:
        return not self.path

    @property
    def label(self) -> str:
        if not self.path:
            return self.curve
        return f"{self.curve}[{' > '.join(self.path)}]"

    def dual_graph(self, with_boundary: bool = False) -> WeightedDualGraph:
        return tower_dual_graph(self.tower, with_boundary)

    def status(self, relative_to_pair: bool = False) -> ExtractionStatus:
        return extraction_status(self.tower, self.curve, relative_to_pair)


def _candidate_points(t: BlowupTower, curve: Optional[str]) -> list[Target]:
    if curve is None:
        if t.germ.is_smooth:
            return [0]
        return sorted(t.points) + list(t.curves)
    return t.points_on(curve) + [curve]


def _multiplicity_bound(t: BlowupTower, target: Target) -> Fraction:
    """A lower bound for a over the point, or -1 when it does not apply.

    With D the crepant boundary on the current model and m = mult(D+) <= 1 at
    the point, its blow-up has a = 2 - mult(D) and every divisor further over
    it has a >= 3 - 2m.  (Blow up once; D+ then meets the new curve in m, so
    it has multiplicity <= m at each point of it, and the new curve enters
    with coefficient m - 1 <= 0, which adds (1 - m) ord_F(E) >= 1 - m.)
    """
    if isinstance(target, str):
        signed = t.curves[target].gamma
        plus = max(signed, Fraction(0))
    else:
        through = t.points[target]
        branches = sum((b.coeff * b.mult for b in t.branches_at(target)), Fraction(0))
        signed = sum((t.curves[c].gamma for c in through), branches)
        plus = sum((max(t.curves[c].gamma, Fraction(0)) for c in through), branches)
    if plus > 1:
        return Fraction(-1)
    return min(2 - signed, 3 - 2 * plus)


def _lower_bound_applies(t: BlowupTower, target: Target, best: Fraction) -> bool:
    """True when every divisor over the point has log discrepancy > best.

    Besides the multiplicity bound, uses the bound for a smooth germ (Z, B + c C) with C smooth, 0 <= c <= 1:
    if (B . C) < 1 at the point then every divisor over it has a > 1 - c.
    Negative coefficients are raised to 0 first, which only lowers a.
    """
    def pos(x):
        return x if x > 0 else Fraction(0)

    if _multiplicity_bound(t, target) > best:
        return True
    if isinstance(target, str):
        g = t.curves[target].gamma
        return g <= 1 and best <= 1 - pos(g)
    through = t.points[target]
    here = t.branches_at(target)
    for c in set(through):
        if through.count(c) != 1:
            continue
        g = t.curves[c].gamma
        if g > 1 or best > 1 - pos(g):
            continue
        other = sum((pos(t.curves[d].gamma) for d in through if d != c), Fraction(0))
        other += sum((b.coeff * t.branch_dot_curve(b.name, c) for b in here), Fraction(0))
        if other < 1:
            return True
    for b in here:
        if b.mult != 1 or best > 1 - b.coeff:
            continue
        other = sum((pos(t.curves[d].gamma) * t.branch_dot_curve(b.name, d) for d in set(through)),
                    Fraction(0))
        other += sum((o.coeff * t.branch_intersection(b.name, o.name) for o in here if o.name != b.name),
                     Fraction(0))
        if other < 1:
            return True
    return False


def enumerate_divisors(g: Union[GermModel, BlowupTower], max_depth: int) -> Iterator[DivisorOverGerm]:
    """Every divisor over x whose canonical tower above the base has <= max_depth blow-ups.

    Divisors of the minimal resolution come first (depth 0).  Each later step
    blows up a special point or a general point of the newest curve.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be positive")
    base = g if isinstance(g, BlowupTower) else BlowupTower.from_germ(g)
    for c in base.curves:
        yield DivisorOverGerm(base, c, base.log_discrepancy(c))
    yield from _walk(base, None, (), max_depth, None)


def _walk(t, curve, path, max_depth, search):
    for target in _candidate_points(t, curve):
        if search is not None and search.cut(t, target):
            continue
        here = path + (t.describe_point(target),)
        child = t.blow_up(target)
        e = child.last_curve
        d = DivisorOverGerm(child, e, child.log_discrepancy(e), here)
        yield d
        if search is not None:
            search.offer(d)
        if len(here) < max_depth:
            yield from _walk(child, e, here, max_depth, search)
        elif search is not None:
            search.check_frontier(child, e)


class _Search:
    def __init__(self):
        self.best: Optional[Fraction] = None
        self.argmin: list[DivisorOverGerm] = []
        self.pruned = False
        self.certified = True

    def offer(self, d: DivisorOverGerm):
        if self.best is None or d.log_discrepancy < self.best:
            self.best, self.argmin = d.log_discrepancy, [d]
        elif d.log_discrepancy == self.best:
            self.argmin.append(d)

    def cut(self, t, target) -> bool:
        if self.best is not None and _lower_bound_applies(t, target, self.best):
            self.pruned = True
            return True
        return False

    def check_frontier(self, t, curve):
        if self.certified:
            self.certified = all(self.best is not None and _lower_bound_applies(t, p, self.best)
                                 for p in _candidate_points(t, curve))


@dataclass(frozen=True)
class MldSearch:
    value: Fraction
    argmin: tuple
    pruned: bool
    certified: bool   # every unexplored point is covered by the lower bound
    depth: int


def mld_bruteforce(g: Union[GermModel, BlowupTower], max_depth: int = 6) -> MldSearch:
    """Minimum log discrepancy over divisors reachable within ``max_depth`` blow-ups."""
    if max_depth < 1:
        raise ValueError("max_depth must be positive")
    base = g if isinstance(g, BlowupTower) else BlowupTower.from_germ(g)
    search = _Search()
    for c in base.curves:
        search.offer(DivisorOverGerm(base, c, base.log_discrepancy(c)))
    for _ in _walk(base, None, (), max_depth, search):
        pass
    return MldSearch(search.best, tuple(search.argmin), search.pruned, search.certified, max_depth)

"""Log discrepancies of surface germs presented by a resolution.

On a resolution ``Y -> X`` with exceptional curves ``F_i`` write
``K_Y + B_Y - sum a_i F_i = f^*(K_X + B)`` and ``gamma_i = 1 - a_i``.  Then for
every exceptional ``F_j``::

    sum_i gamma_i (F_i . F_j) = -(K_Y . F_j + B_Y . F_j)

which is a square system with negative definite matrix.  The same system with
one coefficient pinned to 1 describes the extraction of that single curve.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from . import linalg
from .cluster import BranchCluster, Site, dot_with_base_curve
from .dual_graph import WeightedDualGraph, intersection_matrix, is_negative_definite


@lru_cache(maxsize=512)
def _definite(g: WeightedDualGraph) -> bool:
    return is_negative_definite(intersection_matrix(g))


def fmt(q) -> str:
    """Exact "p/q" rendering used for every rational we print."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}") from exc


@dataclass(frozen=True)
class BoundaryBranch:
    name: str
    coeff: Fraction
    site: Site = field(default_factory=Site)
    cluster: BranchCluster = field(default_factory=BranchCluster.smooth)

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if not 0 <= self.coeff <= 1:
            raise ValueError(f"branch {self.name}: coefficient {fmt(self.coeff)} outside [0, 1]")


@dataclass(frozen=True)
class GermModel:
    """A surface germ via the dual graph of its minimal resolution plus boundary.

    An empty graph is the smooth germ; then every branch sits at the origin.
    """
    graph: WeightedDualGraph = field(default_factory=WeightedDualGraph)
    boundary: tuple[BoundaryBranch, ...] = ()
    name: str = ""

    def __post_init__(self):
        g = self.graph
        if any(not v.exceptional for v in g.vertices):
            raise ValueError("germ graphs contain exceptional curves only")
        if not g.is_connected():
            raise ValueError("the exceptional locus must be connected")
        for v in g.vertices:
            if v.weight == 1 and v.rational:
                raise ValueError(f"vertex {v.id}: a smooth rational curve of weight 1 cannot lie on a "
                                 "minimal resolution")
        if not _definite(g):
            raise ValueError("intersection matrix is not negative definite")
        kept = tuple(b for b in self.boundary if b.coeff != 0)
        names = [b.name for b in kept]
        if len(set(names)) != len(names):
            raise ValueError("boundary branch names must be unique")
        for b in kept:
            if b.name in g:
                raise ValueError(f"branch name {b.name} clashes with a vertex id")
            self._check_site(b)
        object.__setattr__(self, "boundary", kept)

    def _check_site(self, b: BoundaryBranch):
        g, s = self.graph, b.site
        if self.is_smooth:
            if s.kind != "origin":
                raise ValueError(f"branch {b.name}: a smooth germ only has the origin")
            if b.cluster.base_refs():
                raise ValueError(f"branch {b.name}: no base curves to be tangent to on a smooth germ")
            return
        if s.kind == "origin":
            raise ValueError(f"branch {b.name}: attach the branch to an exceptional curve")
        for c in s.curves:
            if c not in g:
                raise ValueError(f"branch {b.name}: unknown curve {c}")
        if s.kind == "meet" and not g.mult(*s.curves):
            raise ValueError(f"branch {b.name}: curves {s.curves[0]} and {s.curves[1]} do not meet")
        if s.kind == "node" and not g.vertex(s.curves[0]).node_count:
            raise ValueError(f"branch {b.name}: curve {s.curves[0]} has no node")
        refs = b.cluster.base_refs()
        if s.kind == "node" and refs:
            raise ValueError(f"branch {b.name}: tangency at a node is ambiguous")
        bad = refs - set(s.curves)
        if bad:
            raise ValueError(f"branch {b.name}: tangent to {sorted(bad)} which do not pass through its site")

    @property
    def is_smooth(self) -> bool:
        return len(self.graph) == 0

    @property
    def ids(self) -> list[str]:
        return self.graph.ids

    def without_boundary(self) -> "GermModel":
        return GermModel(self.graph, (), self.name)

    def boundary_dot(self, curve: str) -> Fraction:
        """B_Y . F for a curve of the minimal resolution."""
        total = Fraction(0)
        for b in self.boundary:
            k = dot_with_base_curve(b.cluster, b.site, curve)
            if k:
                total += b.coeff * k
        return total


# -- the linear systems -------------------------------------------------------

def pullback_coefficients(ids: Sequence[str], matrix, canonical: Mapping[str, int],
                          boundary_dot: Mapping[str, Fraction],
                          pinned: Optional[Mapping[str, Fraction]] = None) -> dict[str, Fraction]:
    """Coefficients gamma with (K + B + sum gamma_i F_i) . F_j = 0 for the unpinned j.

    ``matrix`` is the intersection matrix in the order of ``ids``.  Pinned
    curves keep their given value and contribute to the right-hand side.
    """
    pinned = pinned or {}
    free = [i for i, v in enumerate(ids) if v not in pinned]
    fixed = [(i, Fraction(pinned[v])) for i, v in enumerate(ids) if v in pinned]
    rows, rhs = [], []
    for j in free:
        rows.append([matrix[i][j] for i in free])
        r = -canonical[ids[j]] - boundary_dot.get(ids[j], 0)
        for i, val in fixed:
            if matrix[i][j]:
                r -= matrix[i][j] * val
        rhs.append(r)
    sol = linalg.solve(rows, rhs) if free else []
    out = {v: Fraction(pinned[v]) if v in pinned else None for v in ids}
    for j, x in zip(free, sol):
        out[ids[j]] = x
    return out


def pullback_residual(ids, matrix, canonical, boundary_dot, gamma) -> list[Fraction]:
    """Left minus right side of every row; all zero for an exact solution."""
    out = []
    for j, vj in enumerate(ids):
        lhs = sum((matrix[i][j] * gamma[vi] for i, vi in enumerate(ids)), Fraction(0))
        out.append(lhs + canonical[vj] + Fraction(boundary_dot.get(vj, 0)))
    return out


def _system(g: GermModel, include_boundary: bool = True):
    ids = g.graph.ids
    m = intersection_matrix(g.graph, ids)
    canonical = {v: g.graph.vertex(v).canonical_degree() for v in ids}
    bdot = {v: g.boundary_dot(v) for v in ids} if include_boundary else {}
    return ids, m, canonical, bdot


@dataclass(frozen=True)
class DiscrepancyVector:
    values: dict  # vertex id -> a(F, X, B)

    def __getitem__(self, vid) -> Fraction:
        return self.values[vid]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def items(self):
        return self.values.items()

    def coefficient(self, vid) -> Fraction:
        return 1 - self.values[vid]

    def coefficients(self) -> dict:
        return {k: 1 - v for k, v in self.values.items()}

    def as_strings(self) -> dict:
        return {k: fmt(v) for k, v in self.values.items()}


def solve_discrepancies(g: GermModel) -> DiscrepancyVector:
    ids, m, canonical, bdot = _system(g)
    gamma = pullback_coefficients(ids, m, canonical, bdot)
    return DiscrepancyVector({v: 1 - gamma[v] for v in ids})


def residual(g: GermModel, vec: DiscrepancyVector) -> list[Fraction]:
    ids, m, canonical, bdot = _system(g)
    return pullback_residual(ids, m, canonical, bdot, {v: 1 - vec[v] for v in ids})


class ResolutionMinimum(NamedTuple):
    value: Fraction
    argmin: tuple


def mld_on_resolution(g: GermModel) -> ResolutionMinimum:
    """Smallest log discrepancy among the curves of the minimal resolution."""
    if g.is_smooth:
        raise ValueError("a smooth germ has no exceptional curves; search blow-ups instead")
    vec = solve_discrepancies(g)
    low = min(vec.values.values())
    return ResolutionMinimum(low, tuple(v for v in g.ids if vec[v] == low))


def is_klt_germ(g: GermModel) -> bool:
    """Whether X itself (ignoring B) is klt: every a(F, X, 0) > 0."""
    if g.is_smooth:
        return True
    return all(a > 0 for a in solve_discrepancies(g.without_boundary()).values.values())


# -- extractions ----------------------------------------------------------------

def extraction_coefficients(g: GermModel, e: str, include_boundary: bool = False) -> dict[str, Fraction]:
    """Coefficients c_i (i != e) of K_Y + F_e + sum c_i F_i [+ B_Y] pulled back from the extraction of e."""
    if e not in g.graph:
        raise KeyError(e)
    ids, m, canonical, bdot = _system(g, include_boundary)
    sol = pullback_coefficients(ids, m, canonical, bdot, {e: Fraction(1)})
    return {v: c for v, c in sol.items() if v != e}


class ExtractionStatus(NamedTuple):
    is_kollar: bool
    is_potential_lc_place: bool


def status_from_coefficients(coeffs: Iterable[Fraction]) -> ExtractionStatus:
    # (W, E_W) is plt near E_W iff every other coefficient is < 1 and lc iff <= 1.
    # Being lc already gives the complement G needed for a potential lc place,
    # and a larger boundary only raises coefficients, so <= 1 is also necessary.
    cs = list(coeffs)
    return ExtractionStatus(all(c < 1 for c in cs), all(c <= 1 for c in cs))


def kollar_component_status(g: GermModel, e: str, relative_to_pair: bool = False) -> ExtractionStatus:
    """Kollár-component and potential-lc-place status of a curve of Y.

    By default this is relative to X alone.  ``relative_to_pair`` includes the
    boundary, resolving it first when its branches are not transverse.
    """
    if not is_klt_germ(g):
        raise ValueError("Kollár components are only defined over klt germs")
    if relative_to_pair:
        from .blowup import BlowupTower, extraction_status
        return extraction_status(BlowupTower.from_germ(g), e, relative_to_pair=True)
    node = g.graph.vertex(e).node_count
    st = status_from_coefficients(extraction_coefficients(g, e).values())
    return ExtractionStatus(st.is_kollar and not node, st.is_potential_lc_place)


# -- pair status ------------------------------------------------------------------

@dataclass(frozen=True)
class PairStatus:
    klt: bool
    plt: bool
    dlt: bool
    lc: bool
    resolve_steps: int = 0

    @property
    def label(self) -> str:
        for name in ("klt", "plt", "dlt", "lc"):
            if getattr(self, name):
                return name
        return "not-lc"

    def __str__(self):
        return self.label


def pair_status(g) -> PairStatus:
    """klt/plt/dlt/lc status of a germ or of an already log smooth tower."""
    from .blowup import BlowupTower, resolve_pair, status_on_resolution
    if isinstance(g, BlowupTower):
        if g.non_snc_points():
            raise ValueError("the tower is not log smooth; resolve it first")
        return status_on_resolution(g)
    return status_on_resolution(resolve_pair(g))

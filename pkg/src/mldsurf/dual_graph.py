"""Weighted dual graphs of curve configurations on a smooth surface.

A vertex is a curve; its weight is minus its self-intersection.  Edges carry
the intersection number between two distinct curves, so double edges (two
curves meeting twice) are representable.  Self-nodes of a single curve are a
per-vertex count instead of a loop edge.

Strict transforms of non-exceptional curves (boundary branches) may be added
as vertices with ``exceptional=False``; they have no weight and are drawn as
black dots.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from . import linalg


@dataclass(frozen=True)
class Vertex:
    id: str
    weight: Optional[int] = 2
    genus: int = 0
    node_count: int = 0
    exceptional: bool = True

    def __post_init__(self):
        if self.exceptional:
            if self.weight is None or self.weight < 1:
                raise ValueError(f"vertex {self.id}: weight must be a positive integer, got {self.weight}")
        if self.genus < 0 or self.node_count < 0:
            raise ValueError(f"vertex {self.id}: genus and node count must be non-negative")

    @property
    def rational(self) -> bool:
        return self.genus == 0 and self.node_count == 0

    @property
    def arithmetic_genus(self) -> int:
        return self.genus + self.node_count

    def canonical_degree(self) -> int:
        """K.F by adjunction: 2 p_a - 2 - F^2."""
        return 2 * self.arithmetic_genus - 2 + self.weight


def _key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class WeightedDualGraph:
    vertices: tuple[Vertex, ...] = ()
    edges: Mapping[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self):
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate vertex ids")
        known = set(ids)
        clean = {}
        for (u, v), k in dict(self.edges).items():
            if u == v:
                raise ValueError(f"loop edge at {u}; record self-nodes with node_count")
            if u not in known or v not in known:
                raise ValueError(f"edge ({u}, {v}) references an unknown vertex")
            if not isinstance(k, int) or k < 0:
                raise ValueError(f"edge ({u}, {v}): multiplicity must be a non-negative integer")
            key = _key(u, v)
            if key in clean:
                raise ValueError(f"edge ({u}, {v}) listed twice")
            if k:
                clean[key] = k
        object.__setattr__(self, "edges", clean)

    def __hash__(self):
        return hash((self.vertices, tuple(sorted(self.edges.items()))))

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable = ()) -> "WeightedDualGraph":
        """Convenience constructor.

        ``vertices`` holds Vertex objects or ``(id, weight[, genus[, nodes]])``
        tuples; ``edges`` holds ``(u, v)`` or ``(u, v, multiplicity)``.
        """
        vs = []
        for item in vertices:
            vs.append(item if isinstance(item, Vertex) else Vertex(*item))
        es: dict[tuple[str, str], int] = {}
        for e in edges:
            u, v = e[0], e[1]
            k = e[2] if len(e) > 2 else 1
            key = _key(u, v)
            if key in es:
                raise ValueError(f"edge ({u}, {v}) listed twice")
            es[key] = k
        return cls(tuple(vs), es)

    # -- basic access -----------------------------------------------------
    @property
    def ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    @property
    def exceptional_ids(self) -> list[str]:
        return [v.id for v in self.vertices if v.exceptional]

    def __len__(self):
        return len(self.vertices)

    def vertex(self, vid: str) -> Vertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def __contains__(self, vid) -> bool:
        return any(v.id == vid for v in self.vertices)

    def mult(self, u: str, v: str) -> int:
        if u == v:
            return 0
        return self.edges.get(_key(u, v), 0)

    def neighbours(self, vid: str) -> list[str]:
        out = []
        for (u, v) in self.edges:
            if u == vid:
                out.append(v)
            elif v == vid:
                out.append(u)
        return sorted(out)

    def degree(self, vid: str) -> int:
        """Number of distinct curves meeting ``vid``."""
        return len(self.neighbours(vid))

    def valence(self, vid: str) -> int:
        """Degree counted with edge multiplicities and self-nodes (twice each)."""
        return sum(self.mult(vid, w) for w in self.neighbours(vid)) + 2 * self.vertex(vid).node_count

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(self._component(self.vertices[0].id, set())) == len(self.vertices)

    def _component(self, start: str, removed: set) -> list[str]:
        seen = {start}
        order = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in self.neighbours(u):
                if w not in seen and w not in removed:
                    seen.add(w)
                    order.append(w)
                    queue.append(w)
        return order

    def subgraph(self, ids: Iterable[str]) -> "WeightedDualGraph":
        keep = set(ids)
        vs = tuple(v for v in self.vertices if v.id in keep)
        es = {k: m for k, m in self.edges.items() if k[0] in keep and k[1] in keep}
        return WeightedDualGraph(vs, es)

    def exceptional_part(self) -> "WeightedDualGraph":
        return self.subgraph(self.exceptional_ids)

    def relabel(self, mapping: Mapping[str, str]) -> "WeightedDualGraph":
        vs = tuple(Vertex(mapping.get(v.id, v.id), v.weight, v.genus, v.node_count, v.exceptional)
                   for v in self.vertices)
        es = {_key(mapping.get(u, u), mapping.get(w, w)): k for (u, w), k in self.edges.items()}
        return WeightedDualGraph(vs, es)

    def with_weight(self, vid: str, weight: int) -> "WeightedDualGraph":
        vs = tuple(Vertex(v.id, weight, v.genus, v.node_count, v.exceptional) if v.id == vid else v
                   for v in self.vertices)
        return WeightedDualGraph(vs, dict(self.edges))


def intersection_matrix(g: WeightedDualGraph, order: Optional[list[str]] = None) -> list[list[int]]:
    """Intersection matrix of the exceptional vertices: -weight on the diagonal."""
    ids = order if order is not None else g.exceptional_ids
    idx = {vid: i for i, vid in enumerate(ids)}
    n = len(ids)
    m = [[0] * n for _ in range(n)]
    for vid in ids:
        m[idx[vid]][idx[vid]] = -g.vertex(vid).weight
    for (u, v), k in g.edges.items():
        if u in idx and v in idx:
            m[idx[u]][idx[v]] = k
            m[idx[v]][idx[u]] = k
    return m


def is_negative_definite(m) -> bool:
    return linalg.is_negative_definite(m)


# -- structure ---------------------------------------------------------------

@dataclass(frozen=True)
class GraphStructure:
    forks: tuple[str, ...]
    tails: tuple[str, ...]
    branches: dict  # fork id -> tuple of branches, each ordered from the fork outward
    is_chain: bool
    is_circle: bool
    is_tree: bool

    def branch_lengths(self, fork: Optional[str] = None) -> list[int]:
        if fork is None:
            if len(self.forks) != 1:
                raise ValueError("branch lengths need a unique fork")
            fork = self.forks[0]
        return [len(b) for b in self.branches[fork]]


def _cycle_rank(g: WeightedDualGraph) -> int:
    # first Betti number of the multigraph, nodes counted as loops
    edges = sum(g.edges.values()) + sum(v.node_count for v in g.vertices)
    comps = 0
    seen: set = set()
    for v in g.vertices:
        if v.id not in seen:
            comps += 1
            seen.update(g._component(v.id, set()))
    return edges - len(g.vertices) + comps


def _ordered_path(g: WeightedDualGraph, ids: list[str], start: str) -> tuple[str, ...]:
    inside = set(ids)
    path = [start]
    prev = None
    cur = start
    while True:
        nxt = [w for w in g.neighbours(cur) if w in inside and w != prev and w not in path]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        path.append(cur)
    return tuple(path)


def structure(g: WeightedDualGraph) -> GraphStructure:
    """Forks, tails, branches and chain/circle flags of a dual graph."""
    ids = g.ids
    forks = tuple(v for v in ids if g.degree(v) == 3)
    tails = tuple(v for v in ids if g.degree(v) <= 1)
    connected = g.is_connected()
    rank = _cycle_rank(g)
    is_tree = connected and rank == 0
    is_chain = bool(ids) and is_tree and all(g.degree(v) <= 2 for v in ids)
    is_circle = bool(ids) and connected and rank == 1 and all(g.valence(v) == 2 for v in ids)
    branches = {}
    for f in forks:
        parts = []
        removed = {f}
        for w in g.neighbours(f):
            comp = g._component(w, removed)
            parts.append(_ordered_path(g, comp, w) if all(g.degree(x) <= 2 for x in comp) else tuple(comp))
        parts.sort(key=lambda p: (len(p), p))
        branches[f] = tuple(parts)
    return GraphStructure(forks, tails, branches, is_chain, is_circle, is_tree)


# -- classification ----------------------------------------------------------

@dataclass(frozen=True)
class SingularityClass:
    tag: str            # Smooth, A, D, E, B, C, F, H, Other
    m: Optional[int] = None
    du_val: bool = False

    def __str__(self):
        return self.tag if self.m is None else f"{self.tag}({self.m})"


def chain_determinant(g: WeightedDualGraph, ids) -> Fraction:
    """Determinant of minus the intersection matrix of the given curves."""
    m = intersection_matrix(g, list(ids))
    return linalg.determinant([[-x for x in row] for row in m])


def classify_graph(g: WeightedDualGraph) -> SingularityClass:
    g = g.exceptional_part()
    n = len(g)
    if n == 0:
        return SingularityClass("Smooth")
    if not g.is_connected():
        return SingularityClass("Other", n)
    vs = g.vertices
    if n == 1:
        v = vs[0]
        if v.genus == 1 and v.node_count == 0:
            return SingularityClass("B", 1)
        if v.genus == 0 and v.node_count == 1:
            return SingularityClass("C", 1)
    if not all(v.rational for v in vs):
        return SingularityClass("Other", n)
    s = structure(g)
    all_two = all(v.weight == 2 for v in vs)
    if s.is_circle:
        return SingularityClass("F", n)
    if not s.is_tree or any(k > 1 for k in g.edges.values()):
        return SingularityClass("Other", n)
    definite = is_negative_definite(intersection_matrix(g))
    if s.is_chain:
        return SingularityClass("A", n, all_two) if definite else SingularityClass("Other", n)
    if definite and len(s.forks) == 1 and all(g.degree(v) <= 3 for v in g.ids):
        branches = s.branches[s.forks[0]]
        dets = [chain_determinant(g, b) for b in branches]
        # star-shaped quotient singularities: 1/p + 1/q + 1/r > 1
        if sum(1 / d for d in dets) > 1:
            short_two = [b for b in branches if len(b) == 1 and g.vertex(b[0]).weight == 2]
            return SingularityClass("D" if len(short_two) >= 2 else "E", n, all_two)
    if n >= 5 and _is_h_shape(g):
        return SingularityClass("H", n)
    return SingularityClass("Other", n)


def _is_h_shape(g: WeightedDualGraph) -> bool:
    leaves = [v for v in g.ids if g.degree(v) == 1]
    if len(leaves) != 4 or any(g.vertex(v).weight != 2 for v in leaves):
        return False
    core = [v for v in g.ids if v not in leaves]
    core_graph = g.subgraph(core)
    if not core or not (len(core) == 1 or structure(core_graph).is_chain):
        return False
    if len(core) == 1:
        return g.degree(core[0]) == 4
    ends = [v for v in core if core_graph.degree(v) == 1]
    for v in core:
        attached = sum(1 for w in g.neighbours(v) if w in leaves)
        if attached != (2 if v in ends else 0):
            return False
    return True


# -- DOT output --------------------------------------------------------------

def to_dot(g: WeightedDualGraph, name: str = "dual") -> str:
    """DOT text; exceptional curves labelled "id:weight", other curves filled black."""
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for v in g.vertices:
        if v.exceptional:
            label = f"{v.id}:{v.weight}"
            if v.genus:
                label += f" g{v.genus}"
            if v.node_count:
                label += f" n{v.node_count}"
            lines.append(f'  "{v.id}" [label="{label}"];')
        else:
            lines.append(f'  "{v.id}" [label="{v.id}", style=filled, fillcolor=black, fontcolor=white];')
    for (u, w), k in sorted(g.edges.items()):
        for _ in range(k):
            lines.append(f'  "{u}" -- "{w}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


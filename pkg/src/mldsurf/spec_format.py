"""The ``mldsurf-spec v1`` germ file format.

::

    mldsurf-spec v1
    [germ]
    kind = resolved          # or smooth
    name = d4_duval
    [vertices]
    F1 2                     # id weight [genus [nodes]]
    [edges]
    F1 F2                    # u v [multiplicity]
    [boundary]
    C 1/2 on:F1 1            # name coeff site [cluster]

Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

from typing import Optional

from .cluster import BranchCluster, Site
from .discrepancy import BoundaryBranch, GermModel, fmt, parse_rational
from .dual_graph import Vertex, WeightedDualGraph

HEADER = "mldsurf-spec v1"
SECTIONS = ("germ", "vertices", "edges", "boundary")
GERM_KEYS = ("kind", "name")


class SpecError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse(text: str) -> GermModel:
    lines = text.splitlines()
    body = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(lines)]
    body = [(n, ln) for n, ln in body if ln]
    if not body or body[0][1] != HEADER:
        raise SpecError(f"first line must be {HEADER!r}", body[0][0] if body else 1)
    section = None
    header_line: dict[str, int] = {}
    germ: dict[str, tuple[str, int]] = {}
    vertices, edges, boundary = [], [], []
    for n, ln in body[1:]:
        if ln.startswith("["):
            if not ln.endswith("]") or ln[1:-1].strip() not in SECTIONS:
                raise SpecError(f"unknown section {ln}", n)
            section = ln[1:-1].strip()
            if section in header_line:
                raise SpecError(f"section [{section}] repeated", n)
            header_line[section] = n
            continue
        if section is None:
            raise SpecError("content before the first section", n)
        if section == "germ":
            key, eq, value = ln.partition("=")
            key, value = key.strip(), value.strip()
            if not eq or key not in GERM_KEYS:
                raise SpecError(f"unknown germ key {key!r}", n)
            if key in germ:
                raise SpecError(f"germ key {key!r} repeated", n)
            germ[key] = (value, n)
        elif section == "vertices":
            vertices.append((n, ln.split()))
        elif section == "edges":
            edges.append((n, ln.split()))
        else:
            boundary.append((n, ln.split()))

    kind, kind_line = germ.get("kind", ("resolved", header_line.get("germ", 1)))
    if kind not in ("smooth", "resolved"):
        raise SpecError(f"kind must be smooth or resolved, not {kind!r}", kind_line)
    name = germ.get("name", ("", 0))[0]

    vs = []
    for n, toks in vertices:
        if not 2 <= len(toks) <= 4:
            raise SpecError("vertex lines are: id weight [genus [nodes]]", n)
        try:
            nums = [int(t) for t in toks[1:]]
            vs.append(Vertex(toks[0], *nums))
        except ValueError as exc:
            raise SpecError(str(exc), n) from None
    es = {}
    for n, toks in edges:
        if not 2 <= len(toks) <= 3:
            raise SpecError("edge lines are: u v [multiplicity]", n)
        key = tuple(sorted(toks[:2]))
        if key in es:
            raise SpecError(f"edge {toks[0]} {toks[1]} repeated", n)
        try:
            es[key] = int(toks[2]) if len(toks) == 3 else 1
        except ValueError:
            raise SpecError(f"bad multiplicity {toks[2]!r}", n) from None
    graph_line = header_line.get("vertices", header_line.get("edges", kind_line))
    if kind == "smooth" and vs:
        raise SpecError("a smooth germ has no exceptional curves", graph_line)
    if kind == "resolved" and not vs:
        raise SpecError("a resolved germ needs at least one vertex", graph_line)
    try:
        graph = WeightedDualGraph(tuple(vs), es)
        bare = GermModel(graph, (), name)
    except ValueError as exc:
        raise SpecError(str(exc), graph_line) from None

    branches = []
    for n, toks in boundary:
        if not 3 <= len(toks) <= 4:
            raise SpecError("boundary lines are: name coeff site [cluster]", n)
        try:
            b = BoundaryBranch(toks[0], parse_rational(toks[1]), Site.parse(toks[2]),
                               BranchCluster.parse(toks[3]) if len(toks) == 4 else BranchCluster.smooth())
            GermModel(graph, (b,), name)
        except ValueError as exc:
            raise SpecError(str(exc), n) from None
        branches.append(b)
    try:
        return GermModel(bare.graph, tuple(branches), name)
    except ValueError as exc:
        raise SpecError(str(exc), header_line.get("boundary")) from None


def serialize(g: GermModel) -> str:
    out = [HEADER, "[germ]", f"kind = {'smooth' if g.is_smooth else 'resolved'}"]
    if g.name:
        out.append(f"name = {g.name}")
    if not g.is_smooth:
        out.append("[vertices]")
        for v in g.graph.vertices:
            extra = ""
            if v.genus or v.node_count:
                extra = f" {v.genus}" + (f" {v.node_count}" if v.node_count else "")
            out.append(f"{v.id} {v.weight}{extra}")
        if g.graph.edges:
            out.append("[edges]")
            for (u, w), k in g.graph.edges.items():
                out.append(f"{u} {w}" + (f" {k}" if k != 1 else ""))
    if g.boundary:
        out.append("[boundary]")
        for b in g.boundary:
            out.append(f"{b.name} {fmt(b.coeff)} {b.site} {b.cluster}")
    return "\n".join(out) + "\n"


def load(path) -> GermModel:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())

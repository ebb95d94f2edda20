"""Clusters of infinitely near points carried by one analytic branch.

A branch is recorded by the points it passes through: ``p_0`` (its site on the
base surface), then ``p_1`` on the exceptional curve of ``p_0``, and so on.
Each later point says where it sits on the newest exceptional curve:

* ``free`` -- a non-special point.  Branches at the same point whose next
  positions carry the same label continue through the same point; an
  unlabelled free point belongs to its branch alone.
* ``on(ref)`` -- the intersection with the strict transform of another curve
  through the previous point: ``ref`` is an int ``j`` (the exceptional curve of
  the branch's own point ``p_j``) or the id of a base curve.

After the last listed point the branch is smooth and transverse to everything.
Text form: ``2,1,1:^0`` is the ordinary cusp; ``1,1:~t`` is a smooth branch
whose tangent direction is labelled ``t``; ``1,1:^F1`` is tangent to ``F1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

Ref = Union[int, str]


@dataclass(frozen=True)
class Position:
    ref: Optional[Ref] = None
    label: Optional[str] = None

    def __post_init__(self):
        if self.ref is not None and self.label is not None:
            raise ValueError("a satellite position cannot carry a free label")

    @classmethod
    def free(cls, label: Optional[str] = None) -> "Position":
        return cls(None, label)

    @classmethod
    def on(cls, ref: Ref) -> "Position":
        return cls(ref, None)

    @property
    def is_free(self) -> bool:
        return self.ref is None

    def shares_with(self, other: "Position") -> bool:
        """Same next point for two branches currently at the same point."""
        if self.is_free:
            return other.is_free and self.label is not None and self.label == other.label
        return self.ref == other.ref

    def __str__(self):
        if self.ref is not None:
            return f"^{self.ref}"
        return f"~{self.label}" if self.label is not None else ""


@dataclass(frozen=True)
class BranchCluster:
    multiplicities: tuple[int, ...] = (1,)
    positions: tuple[Position, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "multiplicities", tuple(int(m) for m in self.multiplicities))
        object.__setattr__(self, "positions", tuple(self.positions))
        ms, ps = self.multiplicities, self.positions
        if not ms:
            raise ValueError("a cluster needs at least one point")
        if len(ps) != len(ms) - 1:
            raise ValueError("need one position per point after the first")
        if any(m < 1 for m in ms):
            raise ValueError("multiplicities must be positive")
        if any(a < b for a, b in zip(ms, ms[1:])):
            raise ValueError("multiplicities must weakly decrease along the cluster")
        if ms[-1] != 1:
            raise ValueError("the last point of a cluster must be a smooth point (multiplicity 1)")
        for k in range(1, len(ms)):
            ref = ps[k - 1].ref
            if ref is None:
                continue
            prev = ps[k - 2].ref if k >= 2 else None
            if isinstance(ref, int):
                if not (0 <= ref <= k - 2):
                    raise ValueError(f"point {k}: satellite reference {ref} must point at an earlier, "
                                     "non-adjacent point")
                if not (k - 1 == ref + 1 or prev == ref):
                    raise ValueError(f"point {k}: point {k - 1} does not lie on the exceptional curve of point {ref}")
            elif k >= 2 and prev != ref:
                raise ValueError(f"point {k}: point {k - 1} does not lie on base curve {ref}")
        for j in range(len(ms) - 1):
            total = sum(ms[k] for k in self.proximate_to(j))
            if total != ms[j]:
                raise ValueError(f"proximity equality fails at point {j}: multiplicity {ms[j]}, "
                                 f"proximate points sum to {total}")

    def __len__(self):
        return len(self.multiplicities)

    def mult(self, k: int) -> int:
        """Multiplicity at point k; points past the cluster are smooth."""
        return self.multiplicities[k] if k < len(self.multiplicities) else 1

    def position(self, k: int) -> Optional[Position]:
        """Position of point k (k >= 1), or None past the cluster."""
        if 1 <= k < len(self.multiplicities):
            return self.positions[k - 1]
        return None

    def proximate_to(self, j: int) -> list[int]:
        return [k for k in range(j + 1, len(self.multiplicities))
                if k == j + 1 or self.positions[k - 1].ref == j]

    def base_refs(self) -> set[str]:
        return {p.ref for p in self.positions if isinstance(p.ref, str)}

    @classmethod
    def smooth(cls) -> "BranchCluster":
        return cls((1,), ())

    @classmethod
    def parse(cls, text: str) -> "BranchCluster":
        text = text.strip().strip("[]")
        ms, ps = [], []
        for i, tok in enumerate(t.strip() for t in text.split(",")):
            if not tok:
                raise ValueError(f"empty cluster point in {text!r}")
            mult, _, pos = tok.partition(":")
            ms.append(int(mult))
            if i == 0:
                if pos:
                    raise ValueError("the first cluster point takes no position")
                continue
            if not pos or pos == "free":
                ps.append(Position.free())
            elif pos.startswith("~"):
                ps.append(Position.free(pos[1:]))
            elif pos.startswith("^"):
                r = pos[1:]
                ps.append(Position.on(int(r) if r.isdigit() else r))
            else:
                raise ValueError(f"bad cluster position {pos!r}")
        return cls(tuple(ms), tuple(ps))

    def __str__(self):
        toks = [str(self.multiplicities[0])]
        for m, p in zip(self.multiplicities[1:], self.positions):
            s = str(p)
            toks.append(f"{m}:{s}" if s else str(m))
        return ",".join(toks)


def local_intersection(c1: BranchCluster, c2: BranchCluster) -> int:
    """Noether's formula for two branches through the same point.

    Sum of products of multiplicities over the infinitely near points the two
    clusters share.  Both clusters are read from the same starting point.
    """
    total = c1.mult(0) * c2.mult(0)
    k = 1
    while k < len(c1) and k < len(c2):
        if not c1.positions[k - 1].shares_with(c2.positions[k - 1]):
            break
        total += c1.multiplicities[k] * c2.multiplicities[k]
        k += 1
    return total


@dataclass(frozen=True)
class Site:
    """Where a branch meets the base surface."""
    kind: str = "origin"           # origin | on | meet | node
    curves: tuple[str, ...] = ()
    label: Optional[str] = None    # separates distinct interior points of one curve

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        need = {"origin": 0, "on": 1, "meet": 2, "node": 1}
        if self.kind not in need:
            raise ValueError(f"unknown site kind {self.kind!r}")
        if len(self.curves) != need[self.kind]:
            raise ValueError(f"site {self.kind} needs {need[self.kind]} curve(s)")
        if self.kind == "meet" and self.curves[0] == self.curves[1]:
            raise ValueError("use a node site for a self-intersection point")

    def curve_mult(self, curve: str) -> int:
        """Multiplicity of a base curve at this site."""
        if self.kind == "node":
            return 2 if curve == self.curves[0] else 0
        return 1 if curve in self.curves else 0

    @classmethod
    def parse(cls, text: str) -> "Site":
        text = text.strip()
        if text == "origin":
            return cls()
        kind, sep, rest = text.partition(":")
        if not sep:
            raise ValueError(f"bad site {text!r}")
        label = None
        if "~" in rest:
            rest, label = rest.split("~", 1)
        return cls(kind, tuple(c for c in rest.split(",") if c), label)

    def __str__(self):
        if self.kind == "origin":
            return "origin"
        s = f"{self.kind}:{','.join(self.curves)}"
        return s + (f"~{self.label}" if self.label is not None else "")


def dot_with_base_curve(cluster: BranchCluster, site: Site, curve: str) -> int:
    """Intersection number on the base surface of a branch with a base curve."""
    through = site.curve_mult(curve)
    if not through:
        return 0
    total = through * cluster.mult(0)
    k = 1
    while k < len(cluster) and cluster.positions[k - 1].ref == curve:
        total += cluster.multiplicities[k]
        k += 1
    return total

"""Which divisors compute the mld of an lc surface germ, and what they are.

``classify`` finds the computing divisors by search, flags each one with its
Kollár / potential-lc-place status from the pinned extraction system, and then
checks the flags against the case-by-case classification for surface germs:

1.a   dlt, X smooth or of type A: every computing divisor is a Kollár component.
1.b   dlt, X of type D or E: the fork is the unique Kollár member (i), all
      members lie on the minimal resolution (ii); then either
      1.b.iii (B != 0 or not Du Val): all members are potential lc places and
      for type E only the fork computes, or
      1.b.iv (B = 0, Du Val): every curve computes; for type D a curve is a
      potential lc place iff it is the fork or the two branches at the fork
      not containing it have length 1; for type E iff it is the fork.
2     not dlt, X klt: mld = 0, all members potential lc places, some member
      is a Kollár component, and over a smooth point every member is.
3     X not klt: mld = 0 and all members are potential lc places.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .blowup import DivisorOverGerm, mld_bruteforce
from .discrepancy import GermModel, fmt, is_klt_germ, pair_status
from .dual_graph import SingularityClass, chain_determinant, classify_graph, structure

DEFAULT_DEPTH = 3


@dataclass(frozen=True)
class DivisorVerdict:
    label: str
    log_discrepancy: Fraction
    on_resolution: bool
    is_kollar: Optional[bool]       # None when X is not klt
    is_potential_lc_place: bool
    plt_extraction: bool            # (W, E_W) plt near E_W
    is_potential_lc_place_of_pair: bool


@dataclass(frozen=True)
class ClassificationReport:
    germ: str
    kind: str
    singularity: SingularityClass
    pair: str
    dlt_kind: str
    case_label: str
    clauses: tuple
    mld: Fraction
    computing_set: tuple            # of DivisorVerdict
    depth: int
    complete: bool
    pruned: bool
    failures: tuple = ()
    divisors: tuple = field(default=(), repr=False, compare=False)   # DivisorOverGerm objects

    @property
    def consistency(self) -> bool:
        return not self.failures

    @property
    def kollar_set(self) -> tuple:
        return tuple(d.label for d in self.computing_set if d.is_kollar)

    @property
    def potential_lc_places(self) -> tuple:
        return tuple(d.label for d in self.computing_set if d.is_potential_lc_place)

    @property
    def scope(self) -> str:
        if self.complete:
            return "all"
        if self.mld == 0:
            return f"lc places within depth {self.depth}"
        return f"within depth {self.depth}"

    def to_text(self) -> str:
        def yn(x):
            return "n/a" if x is None else ("yes" if x else "no")

        sing = str(self.singularity) + (" du_val" if self.singularity.du_val else "")
        lines = [
            ("germ", self.germ or "-"),
            ("kind", self.kind),
            ("singularity", sing),
            ("pair", self.pair),
            ("dlt_kind", self.dlt_kind),
            ("case", self.case_label),
            ("clauses", " ".join(self.clauses)),
            ("mld", fmt(self.mld)),
            ("depth", str(self.depth)),
            ("search", ("certified" if self.complete else "depth-limited")
             + (", pruned" if self.pruned else "")),
            ("computing_set_scope", self.scope),
            ("computing_set", " ".join(d.label for d in self.computing_set)),
            ("kollar", " ".join(self.kollar_set) or "-"),
            ("potential_lc_places", " ".join(self.potential_lc_places) or "-"),
        ]
        for d in self.computing_set:
            lines.append((f"divisor {d.label}",
                          f"a={fmt(d.log_discrepancy)} kollar={yn(d.is_kollar)} "
                          f"plc={yn(d.is_potential_lc_place)} plt_extraction={yn(d.plt_extraction)} "
                          f"plc_pair={yn(d.is_potential_lc_place_of_pair)}"))
        lines.append(("consistency", yn(self.consistency)))
        for f in self.failures:
            lines.append(("failure", f))
        return "\n".join(f"{k}: {v}" for k, v in lines) + "\n"


def dlt_kind(g: GermModel) -> str:
    st = pair_status(g)
    if not st.lc:
        raise ValueError("the pair is not lc")
    if st.plt:
        return "plt"
    return "log-smooth-dlt" if st.dlt else "not-dlt"


def is_lc_star(g: GermModel) -> bool:
    """Star-shaped graph with three chains whose determinants satisfy 1/p + 1/q + 1/r = 1."""
    if g.is_smooth:
        return False
    s = structure(g.graph)
    if not s.is_tree or len(s.forks) != 1 or any(g.graph.degree(v) > 3 for v in g.ids):
        return False
    if not all(v.rational for v in g.graph.vertices):
        return False
    dets = [chain_determinant(g.graph, b) for b in s.branches[s.forks[0]]]
    return sum(1 / d for d in dets) == 1


def du_val_d_places(g: GermModel) -> set:
    """Fork plus every curve whose two branches at the fork not containing it have length 1."""
    s = structure(g.graph)
    fork = s.forks[0]
    out = {fork}
    branches = s.branches[fork]
    for i, b in enumerate(branches):
        others = [len(o) for j, o in enumerate(branches) if j != i]
        if others == [1, 1]:
            out.update(b)
    return out


def _verdict(d: DivisorOverGerm, klt: bool) -> DivisorVerdict:
    own = d.status()
    pair = d.status(relative_to_pair=True)
    return DivisorVerdict(d.label, d.log_discrepancy, d.on_resolution,
                          own.is_kollar if klt else None, own.is_potential_lc_place,
                          own.is_kollar, pair.is_potential_lc_place)


def classify(g: GermModel, depth: int = DEFAULT_DEPTH) -> ClassificationReport:
    st = pair_status(g)
    if not st.lc:
        raise ValueError("the pair is not lc")
    # lc places of a non-dlt pair can sit one blow-up past the log resolution
    depth = max(depth, st.resolve_steps + 1)
    search = mld_bruteforce(g, depth)
    klt = is_klt_germ(g)
    cls = classify_graph(g.graph)
    verdicts = tuple(_verdict(d, klt) for d in search.argmin)
    kind = "plt" if st.plt else ("log-smooth-dlt" if st.dlt else "not-dlt")

    fails: list[str] = []
    clauses: list[str] = []

    def need(clause, ok, detail=""):
        clauses.append(clause)
        if not ok:
            fails.append(f"{clause} {detail}".strip())

    def bad(pred):
        return " ".join(v.label for v in verdicts if not pred(v))

    if not klt:
        case = "3"
        need("3", search.value == 0, f"mld {fmt(search.value)} is not 0")
        need("3", all(v.is_potential_lc_place for v in verdicts),
             f"not potential lc places: {bad(lambda v: v.is_potential_lc_place)}")
        expect_plt = cls.tag == "B" or (cls.tag == "H" and cls.m == 5) or is_lc_star(g)
        need("3.plt", all(v.plt_extraction == expect_plt for v in verdicts),
             f"plt extraction expected {expect_plt}: {bad(lambda v: v.plt_extraction == expect_plt)}")
    elif st.dlt and cls.tag in ("Smooth", "A"):
        case = "1.a"
        need("1.a", all(v.is_kollar for v in verdicts), f"not Kollár: {bad(lambda v: v.is_kollar)}")
    elif st.dlt:
        if cls.tag not in ("D", "E"):
            raise ValueError(f"unexpected klt graph type {cls}")
        fork = structure(g.graph).forks[0]
        kollar = [v.label for v in verdicts if v.is_kollar]
        need("1.b.i", kollar == [fork], f"Kollár members {kollar}, fork {fork}")
        need("1.b.ii", all(v.on_resolution for v in verdicts),
             f"off the resolution: {bad(lambda v: v.on_resolution)}")
        labels = {v.label for v in verdicts}
        plc = {v.label for v in verdicts if v.is_potential_lc_place}
        if g.boundary or not cls.du_val:
            case = "1.b.iii"
            need("1.b.iii.A", plc == labels, f"not potential lc places: {sorted(labels - plc)}")
            if cls.tag == "E":
                need("1.b.iii.B", labels == {fork}, f"computing set {sorted(labels)}")
        else:
            case = "1.b.iv"
            need("1.b.iv.A", labels == set(g.ids), f"computing set {sorted(labels)}")
            expected = du_val_d_places(g) if cls.tag == "D" else {fork}
            clause = "1.b.iv.B" if cls.tag == "D" else "1.b.iv.C"
            need(clause, plc == expected, f"potential lc places {sorted(plc)}, expected {sorted(expected)}")
    else:
        case = "2"
        need("2", search.value == 0, f"mld {fmt(search.value)} is not 0")
        need("2.a", all(v.is_potential_lc_place for v in verdicts),
             f"not potential lc places: {bad(lambda v: v.is_potential_lc_place)}")
        need("2.b", any(v.is_kollar for v in verdicts), "no Kollár member")
        if g.is_smooth:
            need("2.c", all(v.is_kollar for v in verdicts), f"not Kollár: {bad(lambda v: v.is_kollar)}")

    return ClassificationReport(
        germ=g.name, kind="smooth" if g.is_smooth else "resolved", singularity=cls, pair=st.label,
        dlt_kind=kind, case_label=case, clauses=tuple(dict.fromkeys(clauses)), mld=search.value,
        computing_set=verdicts, depth=depth, complete=search.certified, pruned=search.pruned,
        failures=tuple(fails), divisors=search.argmin)


@dataclass(frozen=True)
class Verification:
    passed: bool
    report: ClassificationReport
    counterexample: tuple = ()


def verify_theorem(g: GermModel, depth: int = DEFAULT_DEPTH) -> Verification:
    report = classify(g, depth)
    return Verification(report.consistency, report, report.failures)

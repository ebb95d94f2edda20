"""``mldsurf`` command line: discrepancies, classification, DOT graphs and the verification suites.

Exit codes: 0 ok, 1 usage or validation error, 2 a consistency failure.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable

from . import spec_format, suites
from .blowup import BlowupTower, tower_dual_graph
from .classifier import DEFAULT_DEPTH, classify
from .discrepancy import fmt, solve_discrepancies
from .dual_graph import to_dot

OK, INVALID, INCONSISTENT = 0, 1, 2


class Outcome:
    """Buffered output of one file so batch runs print in input order."""

    def __init__(self, code: int = OK, out: str = "", err: str = ""):
        self.code, self.out, self.err = code, out, err


def _discrepancies(path: str, args) -> Outcome:
    g = spec_format.load(path)
    if g.is_smooth:
        return Outcome(OK, "# smooth germ: no exceptional curves\n")
    vec = solve_discrepancies(g)
    width = max(len(v) for v in g.ids)
    return Outcome(OK, "".join(f"{v:<{width}}  {fmt(vec[v])}\n" for v in g.ids))


def _classify(path: str, args) -> Outcome:
    report = classify(spec_format.load(path), args.depth)
    return Outcome(OK if report.consistency else INCONSISTENT, report.to_text())


def _graph(path: str, args) -> Outcome:
    g = spec_format.load(path)
    t = BlowupTower.from_germ(g)
    for step in filter(None, (s.strip() for s in (args.blow_up or "").split(";"))):
        t = t.blow_up_all([step])
    graph = tower_dual_graph(t, with_boundary=True)
    if args.dot:
        return Outcome(OK, to_dot(graph, (g.name or "germ").replace("-", "_")))
    lines = []
    for v in graph.vertices:
        lines.append(f"vertex {v.id} {v.weight}" if v.exceptional else f"branch {v.id}")
    for (u, w), k in sorted(graph.edges.items()):
        lines.append(f"edge {u} {w}" + (f" {k}" if k != 1 else ""))
    return Outcome(OK, "\n".join(lines) + "\n")


def _run_one(job) -> Outcome:
    fn, path, args = job
    try:
        return fn(path, args)
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        return Outcome(INVALID, err=f"{path}: error: {msg}\n")


def _inputs(path: str) -> list[str]:
    p = Path(path)
    if p.is_dir():
        files = sorted(str(f) for f in p.glob("*.germ"))
        if not files:
            raise FileNotFoundError(f"{path}: no .germ files")
        return files
    return [path]


def _per_file(fn: Callable, args) -> int:
    try:
        files = _inputs(args.path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    jobs = [(fn, f, args) for f in files]
    if args.jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    batch = len(files) > 1
    for f, r in zip(files, results):
        if batch and r.out:
            sys.stdout.write(f"== {f}\n")
        sys.stdout.write(r.out)
        sys.stderr.write(r.err)
    return max(r.code for r in results)


def _verify(args) -> int:
    results = suites.run(args.suite, args.seed, args.cases)
    code = OK
    for r in results:
        print(f"{r.name}: {'PASS' if r.passed else 'FAIL'} ({r.cases} cases, {len(r.failures)} failures)")
        for f in r.failures:
            code = INCONSISTENT
            print(f"  case {f.case}: {f.message}")
            for line in f.spec.splitlines():
                print(f"    {line}")
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mldsurf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def file_cmd(name, help_text):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("path", help="a .germ file, or a directory of them")
        s.add_argument("--jobs", type=int, default=1, help="worker processes in batch mode")
        return s

    file_cmd("discrepancies", "log discrepancy of every curve of the minimal resolution")
    c = file_cmd("classify", "mld, computing divisors and the case check")
    c.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="blow-up depth of the divisor search")
    g = file_cmd("graph", "dual graph of the germ or of a blown-up model")
    g.add_argument("--dot", action="store_true", help="emit DOT")
    g.add_argument("--blow-up", metavar="SCRIPT",
                   help='";"-separated points to blow up, e.g. "origin;E1*D" or "F1*F2;E1"')
    v = sub.add_parser("verify", help="seeded property suites")
    v.add_argument("--suite", choices=("lemmas", "theorem14", "all"), default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cases", type=int, default=200)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INVALID if exc.code else OK
    if getattr(args, "depth", 1) < 1 or getattr(args, "jobs", 1) < 1 or getattr(args, "cases", 1) < 0:
        print("error: --depth and --jobs must be positive, --cases non-negative", file=sys.stderr)
        return INVALID
    if args.command == "verify":
        return _verify(args)
    fn = {"discrepancies": _discrepancies, "classify": _classify, "graph": _graph}[args.command]
    return _per_file(fn, args)


if __name__ == "__main__":
    sys.exit(main())

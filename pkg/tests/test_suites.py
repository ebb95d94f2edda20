import random

from mldsurf import suites
from mldsurf.classifier import classify
from mldsurf.discrepancy import pair_status
from mldsurf.dual_graph import classify_graph


def test_run_is_deterministic():
    a = suites.run("lemmas", seed=5, cases=5)
    b = suites.run("lemmas", seed=5, cases=5)
    assert [(r.name, r.cases, len(r.failures)) for r in a] == [(r.name, r.cases, len(r.failures)) for r in b]
    assert all(r.passed for r in a)


def test_generators_respect_their_contracts():
    rng = random.Random(2)
    for _ in range(30):
        g = suites.random_smooth_germ(rng)
        assert g.is_smooth and pair_status(g).lc
        de = suites.random_de_graph(rng)
        assert classify_graph(de).tag in ("D", "E")
        plt = suites.random_boundary_model(rng, de, plt=True)
        assert pair_status(plt).plt and plt.boundary


def test_failure_carries_a_replayable_spec():
    from mldsurf import catalog, spec_format
    res = suites.SuiteResult("x")
    res.fail(3, "boom", catalog.bd12_d4())
    assert spec_format.parse(res.failures[0].spec) == catalog.bd12_d4()
    assert not res.passed


def test_theorem_suite_covers_all_case_labels():
    rng = random.Random(0)
    seen = set()
    graphs = list(suites.ade_graphs(True).values()) + list(suites.ade_graphs(False).values())
    for _ in range(60):
        g = suites.random_boundary_model(rng, rng.choice(graphs), plt=rng.random() < 0.5)
        seen.add(classify(g).case_label)
    seen |= {classify(g).case_label for g in suites.examples().values()}
    assert seen >= {"1.a", "1.b.iii", "1.b.iv", "2", "3"}

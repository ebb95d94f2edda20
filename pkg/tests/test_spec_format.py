import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from mldsurf import catalog, spec_format, suites
from mldsurf.spec_format import SpecError, parse, serialize

FIXTURES = Path(catalog.__file__).parent / "fixtures"

D4 = """mldsurf-spec v1
# the Du Val D4
[germ]
kind = resolved
name = d4
[vertices]
F1 2
F2 2      # fork
F3 2
F4 2
[edges]
F1 F2
F2 F3
F2 F4
"""


def test_parse_d4():
    g = parse(D4)
    assert g.name == "d4" and g.ids == ["F1", "F2", "F3", "F4"]
    assert g.graph.degree("F2") == 3


def test_fixtures_match_the_catalog():
    files = {p.stem: spec_format.load(p) for p in FIXTURES.glob("*.germ")}
    assert files == catalog.fixtures()
    for name in ("d4_duval", "e8_duval", "bd12_d4", "kawakita", "h5", "d4_extraction_pair"):
        assert name in files


@pytest.mark.parametrize("g", list(catalog.examples().values()), ids=list(catalog.examples()))
def test_catalog_round_trip(g):
    assert parse(serialize(g)) == g


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_round_trip(seed):
    rng = random.Random(seed)
    if rng.random() < 0.5:
        g = suites.random_smooth_germ(rng, lc=False)
    else:
        g = suites.random_boundary_model(rng, rng.choice(list(catalog.ade_graphs(False).values())), plt=False)
    text = serialize(g)
    assert parse(text) == g
    assert serialize(parse(text)) == text


@pytest.mark.parametrize("text, line", [
    ("not a header\n", 1),
    ("mldsurf-spec v1\n[germ]\ncolour = red\n", 3),
    ("mldsurf-spec v1\n[stuff]\n", 2),
    ("mldsurf-spec v1\n[germ]\nkind = weird\n", 3),
    ("mldsurf-spec v1\n[vertices]\nF1 two\n", 3),
    ("mldsurf-spec v1\n[vertices]\nF1 2\n[vertices]\n", 4),
    ("mldsurf-spec v1\n[vertices]\nF1 2\nF2 1\nF3 2\n[edges]\nF1 F2\nF2 F3\n", 2),
    ("mldsurf-spec v1\n[vertices]\nF1 2\n[boundary]\nC 1/2 on:F9\n", 5),
    ("mldsurf-spec v1\n[vertices]\nF1 2\n[boundary]\nC 3/2 on:F1\n", 5),
    ("mldsurf-spec v1\n[vertices]\nF1 2\n[boundary]\nC 1/2 on:F1 2,1\n", 5),
    ("mldsurf-spec v1\n[germ]\nkind = smooth\n[vertices]\nF1 2\n", 4),
    ("mldsurf-spec v1\n[germ]\nkind = resolved\n", 3),
])
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(SpecError) as err:
        parse(text)
    assert err.value.line == line
    assert str(err.value).startswith(f"line {line}:")


def test_duplicate_branch_names():
    text = "mldsurf-spec v1\n[germ]\nkind = smooth\n[boundary]\nC 1/2 origin\nC 1/3 origin\n"
    with pytest.raises(SpecError):
        parse(text)

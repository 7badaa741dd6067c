from __future__ import annotations

import json
from collections import Counter
from pathlib import Path

import pytest

from ladderschemes.generate import (
    generate_level,
    generate_schemes,
    insert_connecting_N,
    insert_separating,
    insert_two_edge_connection,
)
from ladderschemes.reduce import has_melon
from ladderschemes.series import G_g, scheme_gf
from ladderschemes.stranded import (
    StructureError,
    canonical_code,
    closed_ladder,
    cycle_graph,
    from_json,
    genus_grade,
    invariants,
    is_2pi,
    realize,
)

FIXTURES = sorted((Path(__file__).parent / "fixtures").glob("*.json"))


def _profile(s):
    return (s.kinds.count("S"), tuple(sorted(k for k in s.kinds if k not in ("r", "S"))))


def test_genus_zero_is_the_cycle():
    s = generate_schemes(0)
    assert list(s.schemes.values()) == [cycle_graph()]


def test_genus_one_breakdown():
    s = generate_schemes(1)
    assert len(s.schemes) == 18 and len(s.schemes_2pi) == 2
    two_pi = sorted(_profile(x) for x in s.schemes_2pi.values())
    assert two_pi == [(0, ("Ne",)), (2, ("No",))]
    reducible = Counter(_profile(x) for c, x in s.schemes.items() if c not in s.schemes_2pi)
    # each 2PI scheme with one separating ladder-vertex of every type towards a genus-0 part
    for base, p in (("Ne", 0), ("No", 2)):
        for x in ("Ne", "No", "L", "R", "B"):
            assert reducible[(p, tuple(sorted((base, x))))] == 1
    # and the three two-edge connections of each 2PI scheme with the cycle-rooted copy of itself
    assert reducible[(2, ("Ne",))] == 3 and reducible[(4, ("No",))] == 3
    assert sum(reducible.values()) == 16


def test_schemes_are_valid():
    for g in (1, 2):
        for s in list(generate_schemes(g).schemes.values())[::50]:
            assert genus_grade(s) == (g, 0)
            assert not has_melon(s)


def test_genus_two_totals():
    s = generate_schemes(2)
    assert len(s.schemes) == 21150 and len(s.schemes_2pi) == 82
    b = Counter(x.kinds.count("B") for x in s.schemes.values())
    assert max(b) == 3 and b[3] == 16


def test_two_pi_series_matches_graph_level():
    from ladderschemes.series import G_g_2pi

    for genus, vmax in ((1, 12), (2, 10)):
        t = G_g_2pi(list(generate_schemes(genus).schemes_2pi.values()), vmax)
        lev = generate_level(genus, vmax)
        census = Counter(g.v for g in lev.two_pi.values())
        assert {v: int(t[v]) for v in range(vmax + 1) if t[v]} == dict(census)


def test_level_censuses_match_scheme_series():
    # melon-free graphs of genus g with v vertices: [u^(v/2)] of the scheme sum at unit propagators
    for genus, vmax in ((1, 12), (2, 10)):
        lev = generate_level(genus, vmax)
        total = None
        for s in generate_schemes(genus).schemes.values():
            x = scheme_gf(s, vmax // 2)
            total = x if total is None else total + x
        assert {v: int(total[v // 2]) for v in lev.census()} == lev.census()


def test_level_graphs_have_the_right_invariants():
    lev = generate_level(2, 8)
    for g in lev.graphs.values():
        assert genus_grade(g) == (2, 0) and not has_melon(g)
    assert set(lev.two_pi) | set(lev.two_pr) == set(lev.graphs)
    for c, g in lev.two_pi.items():
        assert is_2pi(g)


def test_level_is_cached_and_sliced():
    small, big = generate_level(1, 8), generate_level(1, 10)
    assert set(small.graphs) <= set(big.graphs)


@pytest.mark.parametrize("path", FIXTURES, ids=[p.stem for p in FIXTURES])
def test_fixture_is_generated(path):
    g = from_json(json.loads(path.read_text()))
    assert genus_grade(g) == (2, 0)
    assert canonical_code(g) in generate_level(2, 12).graphs


def test_connecting_insertion_raises_genus():
    g = realize(closed_ladder("Ne"))
    h = insert_connecting_N(cycle_graph(), (0, 0), 2)
    assert genus_grade(h) == (1, 0)
    assert canonical_code(h) == canonical_code(g)
    with pytest.raises(ValueError):
        insert_connecting_N(cycle_graph(), (0, 0), 0)


def test_separating_insertion_is_additive():
    s1 = realize(closed_ladder("Ne"))
    for word in ("N", "L", "R", "NN", "NL"):
        h = insert_separating(s1, s1, word)
        a = invariants(h)
        assert (a.g, a.ell) == (2, 0)


def test_two_edge_connection_is_additive_and_reducible():
    s1 = realize(closed_ladder("Ne"))
    h = insert_two_edge_connection(s1, s1)
    assert genus_grade(h) == (2, 0) and not is_2pi(h)


def test_cannot_glue_the_cycle():
    with pytest.raises(StructureError):
        insert_two_edge_connection(realize(closed_ladder("Ne")), cycle_graph())

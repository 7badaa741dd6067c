from __future__ import annotations

import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import oracle_graphs
from ladderschemes.stranded import (
    StructureError,
    build,
    canonical_code,
    canonical_form,
    closed_ladder,
    code_hex,
    cycle_graph,
    face_counts,
    from_json,
    genus_grade,
    invariants,
    is_2pi,
    random_relabel,
    realize,
    rooted_melon,
    to_json,
    trace_faces,
    two_edge_cuts,
    validate,
)

GRAPHS = oracle_graphs(4)


def test_cycle_graph_invariants():
    inv = invariants(cycle_graph())
    assert (inv.v, inv.g, inv.ell, inv.omega) == (0, 0, 0, 0)


def test_rooted_melon_invariants():
    inv = invariants(rooted_melon())
    assert (inv.v, inv.g, inv.ell) == (2, 0, 0)


def test_closed_ladders_have_vanishing_grade_at_genus_one():
    assert genus_grade(closed_ladder("Ne")) == (1, 0)
    # the odd ladder needs the extra vertex pair of the melon configuration
    assert genus_grade(closed_ladder("No"))[1] > 0


def test_validate_rejects_orientation_mismatch():
    with pytest.raises(StructureError):
        build(["r"], [(0, 0, 0, 0)])


def test_face_census_matches_counts():
    for g in GRAPHS[:200]:
        census = trace_faces(g)
        assert (census.f_L, census.f_R, census.phi) == face_counts(g)
        assert sum(census.loop_lengths) == 2 * g.v


def test_degree_is_genus_plus_half_grade():
    for g in GRAPHS:
        inv = invariants(g)
        assert inv.omega == inv.g + inv.ell / 2
        assert inv.ell >= 0 and inv.g >= 0


@given(st.integers(0, len(GRAPHS) - 1), st.integers(0, 2 ** 32))
def test_canonical_code_is_relabel_invariant(i, seed):
    g = GRAPHS[i]
    h = random_relabel(g, random.Random(seed))
    validate(h)
    assert canonical_code(h) == canonical_code(g)
    assert invariants(h) == invariants(g)


@given(st.integers(0, len(GRAPHS) - 1))
def test_canonical_form_is_idempotent(i):
    c = canonical_form(GRAPHS[i])
    assert canonical_form(c) == c


def test_oracle_classes_have_distinct_codes():
    codes = [canonical_code(g) for g in GRAPHS]
    assert len(set(codes)) == len(codes)


@given(st.integers(0, len(GRAPHS) - 1))
def test_json_round_trip(i):
    g = GRAPHS[i]
    back = from_json(json.dumps(to_json(g)))
    assert back == g
    assert code_hex(back) == canonical_code(g).hex()


def test_scheme_json_carries_ladder_vertices():
    s = closed_ladder("Ne")
    data = to_json(s)
    assert data["ladder_vertices"][0]["type"] == "Ne"
    assert from_json(data) == s


def test_realize_expands_minimal_ladder():
    r = realize(closed_ladder("Ne"))
    assert r.v == 4 and r.ladder_vertices() == []
    assert realize(closed_ladder("Ne"), {1: "NNNN"}).v == 8


def test_two_pi_examples():
    assert is_2pi(cycle_graph())
    assert is_2pi(rooted_melon())
    assert is_2pi(realize(closed_ladder("Ne")))


def test_two_edge_cuts_disconnect():
    from ladderschemes.reduce import flip

    seen = 0
    for g in GRAPHS:
        for cut in two_edge_cuts(g):
            g1, g2 = flip(g, cut)
            assert g1.root is not None and g2.root is not None
            seen += 1
    assert seen > 0

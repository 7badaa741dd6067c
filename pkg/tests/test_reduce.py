from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from conftest import grade_zero_graphs, oracle_graphs
from ladderschemes.generate import generate_level, generate_schemes
from ladderschemes.reduce import (
    classify_dipole,
    combine_types,
    contract,
    contraction_record,
    find_dipoles,
    find_melons,
    flip,
    flip_holds,
    has_melon,
    insert_melon,
    maximal_ladders,
    melon_core,
    to_scheme,
)
from ladderschemes.stranded import (
    STANDARD,
    StructureError,
    canonical_code,
    closed_ladder,
    cycle_graph,
    genus_grade,
    invariants,
    is_2pi,
    realize,
    rooted_melon,
    two_edge_cuts,
)

ZERO = grade_zero_graphs(6)


def test_find_melons_examples():
    assert len(find_melons(rooted_melon())) == 1
    assert find_melons(cycle_graph()) == []
    series = insert_melon(rooted_melon(), 0)
    assert series.v == 4 and len(find_melons(series)) == 2
    # inside another melon only the inner one is elementary
    nested = insert_melon(rooted_melon(), 4 * 1 + 0)
    assert nested.v == 4 and len(find_melons(nested)) == 1


def test_melonic_graphs_reduce_to_the_cycle():
    for g in ZERO:
        if genus_grade(g)[0] == 0:
            core, hist = melon_core(g)
            assert core == cycle_graph()
            assert len(hist) == g.v // 2


@given(st.integers(0, len(ZERO) - 1))
def test_core_does_not_depend_on_removal_order(i):
    g = ZERO[i]
    a, _ = melon_core(g, "first")
    b, _ = melon_core(g, "last")
    assert canonical_code(a) == canonical_code(b)
    assert invariants(a).g == invariants(g).g and invariants(a).ell == invariants(g).ell


@given(st.integers(0, len(ZERO) - 1), st.data())
def test_melon_insertion_preserves_invariants(i, data):
    g = ZERO[i]
    tail = data.draw(st.sampled_from([t for t, _ in g.edges()]))
    h = insert_melon(g, tail)
    a, b = invariants(g), invariants(h)
    assert (a.g, a.ell, a.omega) == (b.g, b.ell, b.omega)


def test_combined_ladder_types():
    assert combine_types(["N", "N"]) == "Ne"
    assert combine_types(["N", "N", "N"]) == "No"
    assert combine_types(["N", "L", "N"]) == "B"
    assert combine_types(["L", "L"]) == "L"


def test_minimal_even_ladder_becomes_one_ladder_vertex():
    g = realize(closed_ladder("Ne"))
    (lad,) = maximal_ladders(g)
    assert lad.kind == "Ne"
    assert to_scheme(g) == closed_ladder("Ne")


def test_mixed_ladder_is_broken():
    g = realize(closed_ladder("Ne"), {1: "NLN"})
    (lad,) = maximal_ladders(g)
    assert lad.kind == "B"


def test_cycle_is_its_own_scheme():
    assert to_scheme(cycle_graph()) == cycle_graph()


def test_to_scheme_rejects_melons():
    try:
        to_scheme(rooted_melon())
    except StructureError:
        return
    raise AssertionError("melonic input accepted")


SCHEMES1 = list(generate_schemes(1).schemes.values())


@given(st.integers(0, len(SCHEMES1) - 1), st.data())
def test_to_scheme_inverts_realize(i, data):
    s = SCHEMES1[i]
    words = {}
    for v in s.ladder_vertices():
        kind = s.kinds[v]
        pool = {"Ne": ["NN", "NNNN"], "No": ["NNN", "NNNNN"], "L": ["LL", "LLL"], "R": ["RR", "RRRR"],
                "B": ["NL", "LN", "RNL", "NNR"]}[kind]
        words[v] = data.draw(st.sampled_from(pool))
    g = realize(s, words)
    assert canonical_code(to_scheme(g)) == canonical_code(s)
    assert genus_grade(g) == genus_grade(s)


def test_scheme_and_graph_agree_on_two_pi():
    lev = generate_level(1, 10)
    for g in lev.graphs.values():
        assert is_2pi(g) == is_2pi(to_scheme(g))


def test_minimal_even_ladder_dipoles_are_connecting():
    g = realize(closed_ladder("Ne"))
    ds = find_dipoles(g)
    assert ds and all(classify_dipole(g, d) == ("N", "connecting") for d in ds)
    (res,) = contract(g, ds[0])
    assert genus_grade(res) == (0, 0)


def test_separating_dipoles_split_invariants():
    lev = generate_level(2, 10)
    seen = 0
    for g in lev.two_pr.values():
        for d in find_dipoles(g):
            rec = contraction_record(g, d)
            assert rec.holds
            if rec.separating:
                seen += 1
                assert len(rec.after) == 2
    assert seen > 0


def test_grade_zero_dipoles_are_separating_or_connecting():
    for g in ZERO:
        if g.v == 0:
            continue
        ds = find_dipoles(g)
        if not has_melon(g):
            assert any(d.letter == "N" for d in ds)
        for d in ds:
            try:
                kind, role = classify_dipole(g, d)
            except StructureError:
                continue
            if kind == "N":
                assert role in ("separating", "connecting")
            else:
                assert role == "separating"


def test_nonseparating_L_R_B_at_positive_grade():
    classes = set()
    for g in oracle_graphs(4):
        try:
            ladders = maximal_ladders(g)
        except StructureError:
            ladders = []
        for t in find_dipoles(g) + ladders:
            try:
                rec = contraction_record(g, t)
            except StructureError:
                continue
            if rec.kind in ("L", "R", "B") and not rec.separating:
                assert rec.holds
                classes.add(rec.kind)
    assert classes == {"L", "R", "B"}


def test_nonseparating_N_can_keep_the_loop_count():
    # at positive grade the two outer strands of an N-dipole may lie on one
    # loop that is rerouted without splitting; the grade then drops by two
    found = 0
    for g in oracle_graphs(4):
        for d in find_dipoles(g):
            try:
                rec = contraction_record(g, d)
            except StructureError:
                continue
            if rec.kind == "N" and not rec.separating and not rec.holds:
                (g0, l0, _), ((g1, l1, _),) = rec.before, rec.after
                assert rec.sigma == 0 and g1 == g0 - 1 and l1 == l0 - 2 and l0 >= 2
                found += 1
    assert found > 0


def test_flips_are_additive():
    n = 0
    for g in ZERO:
        for cut in two_edge_cuts(g):
            assert flip_holds(g, cut)
            n += 1
    assert n > 0


def test_flip_roots_the_far_side():
    g = generate_level(2, 8).two_pr
    g = next(iter(g.values()))
    cut = two_edge_cuts(g)[0]
    g1, g2 = flip(g, cut)
    assert g1.root is not None and g2.root is not None
    assert g1.kinds.count(STANDARD) + g2.kinds.count(STANDARD) == g.v

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ladderschemes.dominant import (
    KAPPA_C,
    D_closed,
    D_closed_taylor,
    D_series,
    DecoratedTree,
    Leaf,
    Node,
    all_trees,
    count_dominant,
    is_dominant,
    mean_genus,
    mean_genus_asymptotic,
    scheme_to_tree,
    tree_to_scheme,
)
from ladderschemes.generate import generate_schemes
from ladderschemes.stranded import StructureError, canonical_code, closed_ladder, genus_grade, is_2pi, realize


def test_counts_formula():
    assert [count_dominant(g) for g in (1, 2, 3)] == [2, 16, 256]
    for g in (1, 2, 3):
        assert sum(1 for _ in all_trees(g)) == count_dominant(g)
    with pytest.raises(ValueError):
        count_dominant(0)


def test_tree_decorations():
    t = DecoratedTree(Node("planar", Leaf("even"), Leaf("odd")))
    assert (t.leaves, t.inner, t.edges) == (2, 1, 3)
    assert t.counts()["planar"] == 1
    with pytest.raises(ValueError):
        Leaf("blue")
    with pytest.raises(ValueError):
        Node("bogus", Leaf("even"), Leaf("even"))


TREES3 = list(all_trees(3))


@given(st.integers(0, len(TREES3) - 1))
def test_genus_three_trees_give_dominant_schemes(i):
    t = TREES3[i]
    s = tree_to_scheme(t)
    assert genus_grade(s) == (3, 0)
    assert is_dominant(s)
    assert scheme_to_tree(s) == t


def test_genus_three_schemes_are_distinct():
    assert len({canonical_code(tree_to_scheme(t)) for t in TREES3}) == 256


@pytest.mark.parametrize("g", [1, 2])
def test_trees_match_generated_dominant_schemes(g):
    schemes = generate_schemes(g).schemes
    dom = {c for c, s in schemes.items() if is_dominant(s)}
    assert {canonical_code(tree_to_scheme(t)) for t in all_trees(g)} == dom
    for c in dom:
        assert canonical_code(tree_to_scheme(scheme_to_tree(schemes[c]))) == c


def test_b_count_bound_holds_for_generated_schemes():
    for g in (1, 2):
        assert max(s.kinds.count("B") for s in generate_schemes(g).schemes.values()) == 2 * g - 1


def test_dominant_schemes_are_reducible():
    for t in all_trees(2):
        assert not is_2pi(realize(tree_to_scheme(t)))


def test_non_dominant_scheme_is_rejected():
    s = closed_ladder("Ne")
    assert not is_dominant(s)
    with pytest.raises(StructureError):
        scheme_to_tree(s)


def test_series_matches_closed_form():
    s = D_series(40)
    taylor = D_closed_taylor(40)
    pref = (2 / 3) ** 1.5
    for g in range(1, 41):
        assert math.isclose(s.coefficient(g), pref * float(taylor[g]), rel_tol=1e-12)
    for kappa in (0.1, 0.7, 1.2):
        assert math.isclose(D_series(200).evaluate(kappa), D_closed(kappa), rel_tol=1e-9)


def test_taylor_coefficients_are_exact():
    t = D_closed_taylor(3)
    assert t[1] == Fraction(5, 24) and t[2] == Fraction(25, 1152)


def test_radius():
    assert abs(D_series(200).radius() - KAPPA_C) < 1e-3
    assert math.isclose(KAPPA_C, 2 * math.sqrt(3 / 5))


def test_closed_form_domain():
    with pytest.raises(ValueError):
        D_closed(KAPPA_C)
    with pytest.raises(ValueError):
        mean_genus(0.0)


def test_mean_genus_limits():
    assert abs(mean_genus(1e-3) - 1) < 1e-5
    # the leading divergence takes over only very close to kappa_c
    for eps in (1e-6, 1e-8):
        k = KAPPA_C * math.sqrt(1 - eps)
        assert abs(mean_genus(k) / mean_genus_asymptotic(k) - 1) < 2 * math.sqrt(eps) + 1e-6


def test_mean_genus_is_log_derivative():
    k, h = 1.0, 1e-6
    d = (math.log(D_closed(k + h)) - math.log(D_closed(k - h))) / (2 * h)
    assert math.isclose(mean_genus(k), k * d / 2, rel_tol=1e-6)

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ladderschemes.generate import generate_schemes
from ladderschemes.maps2pi import (
    KAPPA_C,
    C_Ne,
    C_No,
    CubicMap,
    MapBoundExceeded,
    SpinCubicMap,
    all_2pi_dominant,
    count_2pi_dominant,
    count_cubic_maps,
    critical_data,
    D_tilde_from_maps,
    D_tilde_series,
    dominant_2pi_from_generator,
    enumerate_cubic_maps,
    genus_moments,
    ising_gfs,
    ising_side,
    is_2pi_dominant,
    map_to_scheme,
    scheme_side,
    scheme_to_map,
    second_moment_exponent,
    spin_maps,
    variance_genus,
    verify_ising_identity,
)
from ladderschemes.stranded import StructureError, canonical_code, closed_ladder, genus_grade, is_2pi, realize


def test_cubic_map_counts():
    assert [len(enumerate_cubic_maps(n)) for n in range(5)] == [1, 1, 4, 24, 176]
    assert [count_cubic_maps(n) for n in range(5)] == [1, 1, 4, 24, 176]


def test_map_bound():
    with pytest.raises(MapBoundExceeded):
        enumerate_cubic_maps(5)


MAPS3 = enumerate_cubic_maps(3)


@given(st.integers(0, len(MAPS3) - 1))
def test_maps_are_planar_bridgeless_and_canonical(i):
    m = MAPS3[i]
    assert m.is_planar() and m.is_bridgeless()
    assert len(m.faces()) == m.n + 2
    SpinCubicMap(m, (1,) * m.vertices, 1).validate()


def test_maps_are_distinct():
    for n in range(1, 5):
        ms = enumerate_cubic_maps(n)
        assert len({m.alpha for m in ms}) == len(ms)


def test_theta_graph_is_the_only_two_vertex_map():
    (m,) = enumerate_cubic_maps(1)
    assert m.vertices == 2 and len(m.faces()) == 3


def test_spin_map_validation():
    (m,) = enumerate_cubic_maps(1)
    with pytest.raises(StructureError):
        SpinCubicMap(m, (1,), 1)
    with pytest.raises(StructureError):
        SpinCubicMap(m, (1, 0), 1)


def test_genus_one_maps_are_the_two_2pi_schemes():
    s = generate_schemes(1)
    built = {}
    for sm in spin_maps(1):
        assert sm.cubic.alpha == () and sm.edges == 1
        built[sm.sector] = map_to_scheme(sm)
    assert set(map(canonical_code, built.values())) == set(s.schemes_2pi)
    # monochromatic edge: the even ladder; bichromatic: the odd one inside the melon configuration
    assert canonical_code(built["++"]) == canonical_code(closed_ladder("Ne"))
    assert built["+-"].kinds.count("No") == 1 and built["+-"].kinds.count("S") == 2


def test_counts():
    assert [count_2pi_dominant(g) for g in (1, 2, 3)] == [2, 8, 128]
    for g in (1, 2, 3):
        assert len(spin_maps(g)) == count_2pi_dominant(g)


@pytest.mark.parametrize("g", [1, 2])
def test_generator_equality(g):
    assert set(dominant_2pi_from_generator(g)) == set(all_2pi_dominant(g))


@pytest.mark.parametrize("g", [1, 2, 3])
def test_map_round_trip(g):
    for sm in spin_maps(g):
        s = map_to_scheme(sm)
        assert scheme_to_map(s) == sm
        assert sm.monochromatic() == s.kinds.count("Ne")
        assert sm.edges - sm.monochromatic() == s.kinds.count("No")


@pytest.mark.parametrize("g", [1, 2])
def test_scheme_round_trip(g):
    for c, s in dominant_2pi_from_generator(g).items():
        assert canonical_code(map_to_scheme(scheme_to_map(s))) == c


def test_genus_three_schemes():
    schemes = all_2pi_dominant(3)
    assert len(schemes) == 128
    for s in schemes.values():
        assert genus_grade(s) == (3, 0)
        assert is_2pi_dominant(s)
        assert s.kinds.count("Ne") + s.kinds.count("No") == 7


def test_n_vertex_bound_on_generated_2pi_schemes():
    for g in (1, 2):
        for s in generate_schemes(g).schemes_2pi.values():
            n = s.kinds.count("Ne") + s.kinds.count("No")
            assert n <= 3 * g - 2


def test_non_2pi_scheme_is_not_dominant():
    s = next(x for c, x in generate_schemes(2).schemes.items() if c not in generate_schemes(2).schemes_2pi)
    assert not is_2pi(realize(s)) and not is_2pi_dominant(s)
    with pytest.raises(StructureError):
        scheme_to_map(s)


def test_ising_weights():
    u = C_No(10)
    assert C_Ne(10).shift(1) == u


def test_ising_coefficients():
    z = ising_gfs(2)
    assert z.coefficient("++", 1, 1) == 1 and z.coefficient("+-", 1, 0) == 1
    assert sum(z.at_x_one("++").values()) + sum(z.at_x_one("+-").values()) == 2 + 8


def test_ising_identity():
    assert verify_ising_identity(2)
    # the +- sector carries one more power of u
    z = ising_gfs(1)
    s = scheme_side(list(dominant_2pi_from_generator(1).values()), 12)
    assert s == ising_side(z, 1, 12)
    assert s[2] == 1 and s[4] == 2


def test_D_tilde_coefficients():
    d = D_tilde_series(5)
    assert d[0] == Fraction(1, 2) and d[1] == Fraction(1, 32)
    assert D_tilde_from_maps(3) == D_tilde_series(3)


def test_critical_data():
    c = critical_data(200)
    assert abs(c["kappa_c"] - KAPPA_C) < 1e-3
    assert abs(c["exponent"] + 2.5) < 0.125
    assert math.isclose(KAPPA_C, 8 / (3 * math.sqrt(6)))


def test_genus_moments():
    m1, m2 = genus_moments(1e-4)
    assert abs(m1 - 1) < 1e-8 and variance_genus(1e-4) < 1e-8
    assert genus_moments(0.999 * KAPPA_C)[0] < 2
    with pytest.raises(ValueError):
        genus_moments(KAPPA_C)


def test_variance_diverges_with_exponent_one_half():
    assert abs(second_moment_exponent() + 0.5) < 0.05
    assert variance_genus(KAPPA_C * math.sqrt(1 - 1e-5)) > 10 * variance_genus(0.9 * KAPPA_C)

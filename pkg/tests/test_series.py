from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ladderschemes.series import (
    G_g,
    PowerSeries,
    T_at_critical,
    domb_sykes,
    extrapolated_sum,
    fuss_catalan,
    ladder_gf,
    lambda_c_squared,
    log_ratio,
    melonic_T,
    melonic_T_iterated,
    scheme_gf,
)
from ladderschemes.stranded import closed_ladder, cycle_graph

coeff = st.fractions(min_value=-5, max_value=5, max_denominator=7)
series = st.lists(coeff, min_size=1, max_size=8).map(lambda c: PowerSeries.of(c, 7))


@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)


@given(series)
def test_inverse(a):
    if a[0] == 0:
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == PowerSeries.one(7)


@given(series, st.integers(0, 4))
def test_power_is_repeated_product(a, n):
    p = PowerSeries.one(7)
    for _ in range(n):
        p = p * a
    assert a ** n == p


@given(series)
def test_composition_with_identity(a):
    x = PowerSeries.monomial(1, 7)
    assert a.compose(x) == a


@given(series)
def test_json_round_trip(a):
    assert PowerSeries.from_json(json.loads(json.dumps(a.to_json()))) == a


def test_melonic_coefficients_three_ways():
    t = melonic_T(12)
    assert list(t.coeffs[:5]) == [1, 1, 4, 22, 140]
    assert t == melonic_T_iterated(12)
    assert [fuss_catalan(n) for n in range(13)] == list(t.coeffs)


def test_T_satisfies_its_equation():
    t = melonic_T(20)
    x = PowerSeries.monomial(1, 20)
    assert t == 1 + x * t ** 4


def test_T_at_critical_coupling():
    assert lambda_c_squared() == Fraction(27, 256)
    assert abs(T_at_critical(200) - 4 / 3) < 1e-6


def test_extrapolated_sum_on_known_series():
    # sum 1/n^2 = pi^2/6, tail ~ 1/N
    terms = [1 / n ** 2 for n in range(1, 400)]
    assert abs(extrapolated_sum(terms, powers=(1, 2, 3)) - math.pi ** 2 / 6) < 1e-8


def test_domb_sykes_on_catalan_like_coefficients():
    # C(2n, n) ~ 4^n n^(-1/2)
    c = [math.comb(2 * n, n) / 4 ** n for n in range(200)]
    rho, beta = domb_sykes(c)
    assert abs(rho - 1) < 1e-4 and abs(beta + 0.5) < 1e-2
    rho2, beta2 = log_ratio([math.comb(2 * n, n) for n in range(200)])
    assert abs(rho2 - 0.25) < 1e-4 and abs(beta2 + 0.5) < 1e-2


def test_ladder_generating_functions():
    assert list(ladder_gf("Ne", 6).coeffs) == [0, 0, 1, 0, 1, 0, 1]
    assert list(ladder_gf("No", 6).coeffs) == [0, 0, 0, 1, 0, 1, 0]
    assert list(ladder_gf("L", 4).coeffs) == [0, 0, 1, 1, 1]
    # broken ladders: words over {N, L, R} of length >= 2 that are not constant
    b = ladder_gf("B", 6)
    assert [b[k] for k in range(2, 7)] == [3 ** k - 3 for k in range(2, 7)]
    with pytest.raises(ValueError):
        ladder_gf("X", 3)


def test_genus_zero_series_is_T():
    s = G_g([cycle_graph()], 10)
    assert [s[2 * n] for n in range(6)] == list(melonic_T(5).coeffs)


def test_scheme_gf_of_the_even_ladder():
    s = scheme_gf(closed_ladder("Ne"), 8)
    assert list(s.coeffs) == [0, 0, 1, 0, 1, 0, 1, 0, 1]


def test_graph_series_needs_complete_sets():
    with pytest.raises(ValueError):
        G_g([cycle_graph()], 4, complete=False)

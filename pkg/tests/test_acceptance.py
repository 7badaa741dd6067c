"""The ten end-to-end acceptance criteria, one test each; every test prints a PASS/FAIL line."""

from __future__ import annotations

import time

import pytest

from ladderschemes import verify

BUDGET = {1: 60, 2: 600, 3: 10, 4: 120, 5: 120, 6: 10, 7: 300, 8: 300, 9: 10, 10: 60}

CRITERIA = {
    1: ("genus-1 classification", verify.genus_one_classification),
    2: ("oracle equivalence", lambda: verify.oracle_equivalence(6)),
    3: ("melonic coefficients", verify.melonic_coefficients),
    4: ("contraction deltas", verify.contraction_deltas),
    5: ("dominant schemes", verify.dominant_schemes),
    6: ("triple-scaled D", verify.triple_scaled_D),
    7: ("cubic maps", lambda: verify.cubic_maps(4)),
    8: ("2PI-dominant", verify.two_pi_dominant),
    9: ("triple-scaled D tilde", verify.triple_scaled_D_tilde),
    10: ("regression fixtures", verify.fixtures),
}


def _cold_caches():
    from ladderschemes import generate, maps2pi

    generate.generate_schemes.cache_clear()
    generate._graph_levels.cache_clear()
    maps2pi.all_2pi_dominant.cache_clear()


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    # each criterion pays for its own generation so the time budget is honest
    _cold_caches()
    label, fn = CRITERIA[number]
    t = time.perf_counter()
    check = fn()
    elapsed = time.perf_counter() - t
    ok = check.passed and elapsed < BUDGET[number]
    with capsys.disabled():
        print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {label}: {check.computed} ({elapsed:.1f}s, budget {BUDGET[number]}s)")
    assert check.passed, check.computed
    assert elapsed < BUDGET[number]

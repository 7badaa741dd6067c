from __future__ import annotations

from functools import lru_cache

from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@lru_cache(maxsize=None)
def oracle_graphs(v_max: int) -> tuple:
    from ladderschemes.oracle import enumerate_rooted

    return tuple(enumerate_rooted(v_max))


@lru_cache(maxsize=None)
def grade_zero_graphs(v_max: int) -> tuple:
    from ladderschemes.stranded import genus_grade

    return tuple(g for g in oracle_graphs(v_max) if genus_grade(g)[1] == 0)

"""Named end-to-end checks grouped into suites, shared by the CLI and the test-suite."""

from __future__ import annotations

import itertools
import json
import math
import os
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

FIXTURE_DIR = Path(os.environ.get("LADDERSCHEMES_FIXTURES", Path(__file__).resolve().parents[2] / "tests" / "fixtures"))


@dataclass
class Check:
    name: str
    expected: str
    computed: str
    provenance: str
    passed: bool
    seconds: float = 0.0


@dataclass
class VerifyReport:
    suite: str
    fast: bool
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"suite": self.suite, "fast": self.fast, "passed": self.passed, "checks": [asdict(c) for c in self.checks]}

    def text(self) -> str:
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"{mark} {c.name}: expected {c.expected}, got {c.computed} [{c.provenance}] ({c.seconds:.1f}s)")
        lines.append(f"{'PASS' if self.passed else 'FAIL'} {sum(c.passed for c in self.checks)}/{len(self.checks)}")
        return "\n".join(lines)


def _timed(name: str, provenance: str, fn: Callable[[], tuple[object, object, bool]]) -> Check:
    t = time.perf_counter()
    expected, computed, ok = fn()
    return Check(name, str(expected), str(computed), provenance, bool(ok), time.perf_counter() - t)


# ---------------------------------------------------------------- individual criteria


def genus_one_classification() -> Check:
    def run():
        from .generate import generate_schemes

        s = generate_schemes(1)
        got = (len(s.schemes), len(s.schemes_2pi))
        return (18, 2), got, got == (18, 2)

    return _timed("genus-1 schemes (total, 2PI)", "PAPER", run)


def oracle_equivalence(v_max: int = 6) -> Check:
    def run():
        from .generate import generate_level, generate_schemes
        from .oracle import census, melon_free_graphs
        from .series import G_g
        from .stranded import cycle_graph

        mismatches = []
        for genus in (1, 2):
            oracle = set(melon_free_graphs(v_max, genus))
            level = set(generate_level(genus, v_max).graphs)
            if oracle != level:
                mismatches.append(f"melon-free g={genus}: oracle {len(oracle)} vs generator {len(level)}")
        c = census(v_max)
        series = {0: G_g([cycle_graph()], v_max), 1: G_g(list(generate_schemes(1).schemes.values()), v_max)}
        for genus, s in series.items():
            for v in range(0, v_max + 1):
                want = c.counts.get((v, genus, 0), 0)
                if s[v] != want:
                    mismatches.append(f"[lambda^{v}]G_{genus}={s[v]} vs oracle {want}")
        return "no mismatch", mismatches or "no mismatch", not mismatches

    return _timed(f"oracle equivalence v<={v_max}", "DERIVED", run)


def melonic_coefficients() -> Check:
    def run():
        from .series import T_at_critical, fuss_catalan, melonic_T, melonic_T_iterated

        want = [1, 1, 4, 22, 140]
        a = list(melonic_T(4).coeffs)
        b = list(melonic_T_iterated(4).coeffs)
        c = [fuss_catalan(n) for n in range(5)]
        tc = T_at_critical(200)
        ok = a == want and b == want and c == want and abs(tc - 4 / 3) < 1e-6
        return f"{want}, T(lambda_c)=4/3", f"{[int(x) for x in a]}, T(lambda_c)={tc:.9f}", ok

    return _timed("melonic coefficients and T(lambda_c)", "PAPER", run)


def contraction_deltas(min_instances: int = 500, scheme_stride: int = 100, oracle_v: int = 4) -> Check:
    """Contraction deltas on generated vanishing-grade instances, plus the
    non-separating L, R and B classes, which only occur at positive grade,
    on oracle graphs.  Flips are checked on the generated graphs' cuts."""

    def run():
        from .generate import generate_level, generate_schemes
        from .oracle import enumerate_rooted
        from .reduce import contraction_record, find_dipoles, flip_holds, maximal_ladders
        from .stranded import StructureError, two_edge_cuts

        n = bad = flips = flip_bad = 0
        classes: set = set()

        def targets(g, lvs_only=False):
            out = [] if lvs_only else list(find_dipoles(g)) + maximal_ladders(g)
            return out + list(g.ladder_vertices())

        def record(g, t):
            nonlocal n, bad
            try:
                rec = contraction_record(g, t)
            except StructureError:
                return
            n += 1
            bad += not rec.holds
            classes.add((rec.kind, rec.separating))

        graphs = list(generate_level(1, 12).graphs.values()) + list(generate_level(2, 10).graphs.values())
        for g in graphs:
            for t in targets(g):
                record(g, t)
            for cut in two_edge_cuts(g):
                flips += 1
                flip_bad += not flip_holds(g, cut)
        for g in generate_schemes(1).schemes.values():
            for t in targets(g, True):
                record(g, t)
        for g in itertools.islice(generate_schemes(2).schemes.values(), 0, None, scheme_stride):
            for t in targets(g, True):
                record(g, t)
        generated = n
        # positive grade: non-separating L, R and B only
        for g in enumerate_rooted(oracle_v):
            try:
                ladders = maximal_ladders(g)
            except StructureError:
                ladders = []
            for t in find_dipoles(g) + ladders:
                try:
                    rec = contraction_record(g, t)
                except StructureError:
                    continue
                if rec.separating or rec.kind not in ("L", "R", "B"):
                    continue
                n += 1
                bad += not rec.holds
                classes.add((rec.kind, rec.separating))
        ok = generated >= min_instances and bad == 0 and flip_bad == 0 and flips > 0
        got = f"{generated} generated + {n - generated} oracle instances, {bad} failures, {flips} flips, {flip_bad} failures"
        return f">= {min_instances} instances, 0 failures", got, ok

    return _timed("contraction and flip deltas", "PAPER", run)


def dominant_schemes() -> Check:
    def run():
        from .dominant import all_trees, count_dominant, is_dominant, scheme_to_tree, tree_to_scheme
        from .generate import generate_schemes
        from .stranded import canonical_code

        got = []
        ok = True
        for g in (1, 2):
            schemes = generate_schemes(g).schemes
            max_b = max(s.kinds.count("B") for s in schemes.values())
            dom = {c for c, s in schemes.items() if is_dominant(s)}
            trees = list(all_trees(g))
            built = {canonical_code(tree_to_scheme(t)) for t in trees}
            trips = all(scheme_to_tree(tree_to_scheme(t)) == t for t in trees)
            trips = trips and all(canonical_code(tree_to_scheme(scheme_to_tree(schemes[c]))) == c for c in dom)
            got.append((max_b, len(dom), count_dominant(g)))
            ok = ok and max_b == 2 * g - 1 and len(dom) == count_dominant(g) == (2, 16)[g - 1] and built == dom and trips
        return [(1, 2, 2), (3, 16, 16)], got, ok

    return _timed("dominant schemes: max b, counts, tree bijection", "PAPER", run)


def triple_scaled_D(order: int = 40, radius_order: int = 200) -> Check:
    def run():
        from .dominant import KAPPA_C, D_closed_taylor, D_series

        s = D_series(order)
        taylor = D_closed_taylor(order)
        pref = (2 / 3) ** 1.5
        worst = max(abs(s.coefficient(g) - pref * float(taylor[g])) / (pref * float(taylor[g])) for g in range(1, order + 1))
        rad = D_series(radius_order).radius()
        ok = worst < 1e-12 and abs(rad - KAPPA_C) < 1e-3
        return f"Taylor match, kappa_c={KAPPA_C:.7f}", f"max rel. dev {worst:.1e}, radius {rad:.7f}", ok

    return _timed("triple-scaled D(kappa)", "PAPER", run)


def cubic_maps(n_max: int = 4) -> Check:
    def run():
        from .maps2pi import count_cubic_maps, enumerate_cubic_maps

        got = [len(enumerate_cubic_maps(n)) for n in range(n_max + 1)]
        want = [1, 1, 4, 24, 176][: n_max + 1]
        return want, got, got == want == [count_cubic_maps(n) for n in range(n_max + 1)]

    return _timed(f"cubic maps n<={n_max}", "PAPER", run)


def two_pi_dominant() -> Check:
    def run():
        from .maps2pi import (
            all_2pi_dominant,
            count_2pi_dominant,
            dominant_2pi_from_generator,
            is_2pi_dominant,
            map_to_scheme,
            scheme_to_map,
            spin_maps,
            verify_ising_identity,
        )
        from .stranded import canonical_code

        counts = [count_2pi_dominant(g) for g in (1, 2, 3)]
        built = [len(all_2pi_dominant(g)) for g in (1, 2, 3)]
        ok = counts == [2, 8, 128] and built == counts
        for g in (1, 2):
            gen = dominant_2pi_from_generator(g)
            ok = ok and set(gen) == set(all_2pi_dominant(g))
            ok = ok and all(canonical_code(map_to_scheme(scheme_to_map(s))) == c for c, s in gen.items())
        for g in (1, 2, 3):
            ok = ok and all(scheme_to_map(map_to_scheme(m)) == m for m in spin_maps(g))
        ok = ok and all(is_2pi_dominant(s) for s in all_2pi_dominant(3).values())
        ising = verify_ising_identity(2)
        return "[2, 8, 128], generator equal, round trips, Ising identity", f"{counts}, built {built}, Ising {ising}", ok and ising

    return _timed("2PI-dominant schemes and Ising maps", "PAPER", run)


def triple_scaled_D_tilde(order: int = 200) -> Check:
    def run():
        from .maps2pi import KAPPA_C, D_tilde_series, critical_data, mean_genus_2pi, second_moment_exponent

        d0 = D_tilde_series(0)[0]
        crit = critical_data(order)
        mean = mean_genus_2pi(0.999 * KAPPA_C)
        mean_c = mean_genus_2pi(KAPPA_C * math.sqrt(1 - 1e-6))
        slope = second_moment_exponent()
        ok = (
            d0 == Fraction(1, 2)
            and abs(crit["kappa_c"] - KAPPA_C) < 1e-3
            and abs(crit["exponent"] + 2.5) < 0.05 * 2.5
            and math.isfinite(mean)
            and mean_c < 10
            and abs(slope + 0.5) < 0.05
        )
        got = f"D(0)={d0}, kappa_c={crit['kappa_c']:.6f}, exponent={crit['exponent']:.4f}, <g>={mean:.4f}, <g^2> slope={slope:.4f}"
        return f"1/2, {KAPPA_C:.6f}, -5/2, finite, -1/2", got, ok

    return _timed("triple-scaled 2PI series", "PAPER", run)


def fixtures() -> Check:
    def run():
        from .generate import generate_level
        from .stranded import canonical_code, from_json, genus_grade

        files = sorted(FIXTURE_DIR.glob("*.json"))
        level = generate_level(2, 12).graphs
        bad = []
        for f in files:
            g = from_json(json.loads(f.read_text()))
            if genus_grade(g) != (2, 0) or canonical_code(g) not in level:
                bad.append(f.stem)
        return f"{len(files)} members with (2, 0)", bad or f"{len(files)} members", bool(files) and not bad

    return _timed("genus-2 regression fixtures", "PAPER", run)


# ---------------------------------------------------------------- suites


SUITES: dict[str, list[Callable[[bool], Check]]] = {
    "invariants": [lambda fast: contraction_deltas(scheme_stride=400 if fast else 100), lambda fast: fixtures()],
    "oracle": [lambda fast: oracle_equivalence(5 if fast else 6)],
    "schemes": [lambda fast: genus_one_classification()],
    "dominant": [lambda fast: dominant_schemes(), lambda fast: triple_scaled_D()],
    "two-pi": [lambda fast: cubic_maps(3 if fast else 4), lambda fast: two_pi_dominant(), lambda fast: triple_scaled_D_tilde()],
    "series": [lambda fast: melonic_coefficients()],
}
SUITE_NAMES = tuple(SUITES) + ("all",)


def run_verify(suite: str, fast: bool = False) -> VerifyReport:
    if suite not in SUITE_NAMES:
        raise ValueError(f"unknown suite {suite!r}")
    names = [s for s in SUITES if suite in ("all", s)]
    report = VerifyReport(suite, fast)
    seen = set()
    for name in names:
        for make in SUITES[name]:
            check = make(fast)
            if check.name in seen:
                continue
            seen.add(check.name)
            report.checks.append(check)
    return report

"""2PI schemes with the most N-vertices, and Ising-decorated planar cubic maps.

A rooted cubic map is stored on darts: dart ``3v + k`` is the ``k``-th dart
of vertex ``v`` in counter-clockwise rotation, ``alpha`` pairs the two darts
of an edge and dart 0 is the root.  Labels are canonical: vertices are
numbered in the order a scan of the darts discovers them and a new vertex is
entered through its dart 0, so two rooted maps are isomorphic exactly when
their ``alpha`` tuples agree.

Cutting the root edge of such a map in the middle gives two univalent
vertices: ``r`` (the root, always spin +) on the side of dart 0 and ``b`` on
the side of ``alpha[0]``.  Every edge of the opened map becomes an N-vertex,
every trivalent vertex a planar six-point junction of three N-sides, and the
root sits between the sides at ``r`` and ``b``.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .series import PowerSeries, domb_sykes, scheme_gf
from .stranded import ROOT, STANDARD, Editor, StrandedGraph, StructureError, genus_grade, is_2pi, realize

DEFAULT_MAP_BOUND = int(os.environ.get("LADDERSCHEMES_MAP_BOUND", "4"))
KAPPA_C = 8 / (3 * math.sqrt(6))


class MapBoundExceeded(ValueError):
    pass


# ---------------------------------------------------------------- rooted cubic maps


def _sigma(d: int) -> int:
    return d - d % 3 + (d + 1) % 3


@dataclass(frozen=True)
class CubicMap:
    """Rooted cubic map in canonical dart labelling; the empty tuple is the vertex-free loop."""

    alpha: tuple[int, ...]

    @property
    def n(self) -> int:
        """Half the number of vertices."""
        return len(self.alpha) // 6

    @property
    def vertices(self) -> int:
        return len(self.alpha) // 3

    def faces(self) -> list[list[int]]:
        seen = [False] * len(self.alpha)
        out = []
        for d in range(len(self.alpha)):
            if seen[d]:
                continue
            cyc = []
            while not seen[d]:
                seen[d] = True
                cyc.append(d)
                d = _sigma(self.alpha[d])
            out.append(cyc)
        return out

    def is_planar(self) -> bool:
        if not self.alpha:
            return True
        v, e = self.vertices, len(self.alpha) // 2
        return v - e + len(self.faces()) == 2

    def is_bridgeless(self) -> bool:
        a = self.alpha
        nv = self.vertices
        for d in range(len(a)):
            if a[d] < d:
                continue
            # connectivity after deleting the edge {d, a[d]}
            seen = {0}
            stack = [0]
            while stack:
                v = stack.pop()
                for k in range(3):
                    x = 3 * v + k
                    if x == d or x == a[d]:
                        continue
                    w = a[x] // 3
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) < nv:
                return False
        return True


def canonical_map(alpha: Sequence[int], root: int) -> tuple[tuple[int, ...], list[int]]:
    """Relabel a cubic map rooted at dart ``root`` canonically.

    Returns the new ``alpha`` and the old vertex of each new vertex.
    """
    if not alpha:
        return (), []
    entry = {root // 3: root}
    order = [root // 3]
    new_of = {}
    for i, v in enumerate(order):
        e = entry[v]
        for k in range(3):
            d = 3 * (e // 3) + (e % 3 + k) % 3
            new_of[d] = 3 * i + k
            w = alpha[d] // 3
            if w not in entry:
                entry[w] = alpha[d]
                order.append(w)
            if len(order) > len(alpha) // 3:
                break
    if len(order) * 3 != len(alpha):
        raise StructureError("map is not connected")
    out = [0] * len(alpha)
    for d, nd in new_of.items():
        out[nd] = new_of[alpha[d]]
    return tuple(out), order


def _check_map_bound(n: int, bound: int | None) -> None:
    bound = DEFAULT_MAP_BOUND if bound is None else bound
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > bound:
        raise MapBoundExceeded(f"n={n} exceeds the map enumeration bound {bound}; raise it explicitly")


def _rooted_cubic(n: int) -> Iterator[tuple[int, ...]]:
    """All rooted connected cubic maps with 2n vertices, any genus, each once."""
    nv = 2 * n
    alpha = [-1] * (3 * nv)
    count = [1]

    def run(d: int) -> Iterator[tuple[int, ...]]:
        while d < 3 * count[0] and alpha[d] >= 0:
            d += 1
        if d == 3 * count[0]:
            if count[0] == nv:
                yield tuple(alpha)
            return
        for x in range(d + 1, 3 * count[0]):
            if alpha[x] < 0:
                alpha[d], alpha[x] = x, d
                yield from run(d + 1)
                alpha[d] = alpha[x] = -1
        if count[0] < nv:
            x = 3 * count[0]
            count[0] += 1
            alpha[d], alpha[x] = x, d
            yield from run(d + 1)
            alpha[d] = alpha[x] = -1
            count[0] -= 1

    yield from run(0)


def enumerate_cubic_maps(n: int, bound: int | None = None) -> list[CubicMap]:
    """Rooted bridgeless planar cubic maps with ``2n`` vertices (the empty loop for ``n = 0``)."""
    _check_map_bound(n, bound)
    if n == 0:
        return [CubicMap(())]
    out = []
    for a in _rooted_cubic(n):
        m = CubicMap(a)
        if m.is_planar() and m.is_bridgeless():
            out.append(m)
    return out


def count_cubic_maps(n: int) -> int:
    """Closed form ``2^n (3n)! / ((n+1)! (2n+1)!)``."""
    return 2 ** n * math.factorial(3 * n) // (math.factorial(n + 1) * math.factorial(2 * n + 1))


# ---------------------------------------------------------------- spin maps


@dataclass(frozen=True)
class SpinCubicMap:
    """A rooted cubic map with a spin (+1/-1) on each trivalent vertex and on ``b``.

    The root univalent vertex always carries spin +1 and is not stored.
    """

    cubic: CubicMap
    spins: tuple[int, ...]
    far: int

    def __post_init__(self):
        if len(self.spins) != self.cubic.vertices:
            raise StructureError("one spin per trivalent vertex")
        if any(s not in (1, -1) for s in self.spins + (self.far,)):
            raise StructureError("spins are +1 or -1")

    @property
    def genus(self) -> int:
        return self.cubic.n + 1

    @property
    def edges(self) -> int:
        return 3 * self.cubic.n + 1

    def open_edges(self) -> list[tuple[int, int]]:
        """Spin pairs on the edges of the opened map."""
        a = self.cubic.alpha
        if not a:
            return [(1, self.far)]
        out = [(1, self.spins[0]), (self.spins[a[0] // 3], self.far)]
        for d in range(1, len(a)):
            if a[d] > d and d != a[0]:
                out.append((self.spins[d // 3], self.spins[a[d] // 3]))
        return out

    def monochromatic(self) -> int:
        return sum(1 for x, y in self.open_edges() if x == y)

    @property
    def sector(self) -> str:
        return "++" if self.far == 1 else "+-"

    def validate(self) -> None:
        m = self.cubic
        if m.alpha:
            if len(m.alpha) % 6:
                raise StructureError("a cubic map has an even number of vertices")
            if tuple(canonical_map(m.alpha, 0)[0]) != m.alpha:
                raise StructureError("map is not in canonical labelling")
        if not m.is_planar():
            raise StructureError("map is not planar")
        if not m.is_bridgeless():
            raise StructureError("closed map has a bridge")


def spin_maps(g: int, bound: int | None = None) -> list[SpinCubicMap]:
    """All spin-decorated maps whose scheme has genus ``g``."""
    if g < 1:
        raise ValueError("genus must be at least 1")
    out = []
    for m in enumerate_cubic_maps(g - 1, bound):
        nv = m.vertices
        for bits in range(2 ** (nv + 1)):
            spins = tuple(1 if (bits >> i) & 1 == 0 else -1 for i in range(nv))
            far = 1 if (bits >> nv) & 1 == 0 else -1
            out.append(SpinCubicMap(m, spins, far))
    return out


def count_2pi_dominant(g: int) -> int:
    """``2^(2g-1) M_(g-1)``: free spins on all vertices but the root."""
    if g < 1:
        raise ValueError("genus must be at least 1")
    return 2 ** (2 * g - 1) * count_cubic_maps(g - 1)


# ---------------------------------------------------------------- maps -> schemes


def _n_count(scheme: StrandedGraph) -> int:
    return scheme.kinds.count("Ne") + scheme.kinds.count("No")


def is_2pi_dominant(scheme: StrandedGraph) -> bool:
    """2PI, vanishing grade and 3g - 2 N-vertices."""
    g = realize(scheme)
    genus, ell = genus_grade(g)
    if ell != 0 or genus < 1:
        return False
    if _n_count(scheme) != 3 * genus - 2:
        return False
    return is_2pi(g)


def map_to_scheme(smap: SpinCubicMap) -> StrandedGraph:
    smap.validate()
    a = smap.cubic.alpha
    ed = Editor()
    r = ed.add(ROOT)
    # the side of an N-vertex seen from each dart, as (in, out) slots
    side: dict = {}

    def edge(kind_spins, end_a, end_b):
        x = ed.add("Ne" if kind_spins[0] == kind_spins[1] else "No")
        side[end_a] = (4 * x + 1, 4 * x)
        side[end_b] = (4 * x + 3, 4 * x + 2)

    if not a:
        edge((1, smap.far), "r", "b")
    else:
        edge((1, smap.spins[0]), "r", 0)
        edge((smap.spins[a[0] // 3], smap.far), a[0], "b")
        for d in range(1, len(a)):
            if a[d] > d and d != a[0]:
                edge((smap.spins[d // 3], smap.spins[a[d] // 3]), d, a[d])
    for v, s in enumerate(smap.spins):
        ring = [3 * v, 3 * v + 1, 3 * v + 2] if s == 1 else [3 * v, 3 * v + 2, 3 * v + 1]
        for i in range(3):
            ed.connect(side[ring[i]][1], side[ring[(i + 1) % 3]][0])
    sr, sb = side["r"], side["b"]
    if smap.far == 1:
        ed.connect(4 * r, sr[0])
        ed.connect(sr[1], sb[0])
        ed.connect(sb[1], 4 * r + 1)
    else:
        u, w = ed.add(STANDARD), ed.add(STANDARD)
        ed.connect(4 * r, 4 * u + 3)
        ed.connect(4 * w + 2, 4 * r + 1)
        ed.connect(4 * w, 4 * u + 1)
        ed.connect(4 * u, sr[0])
        ed.connect(sr[1], 4 * w + 1)
        ed.connect(4 * u + 2, sb[0])
        ed.connect(sb[1], 4 * w + 3)
    return ed.freeze()


def _side_at(slot: int) -> tuple[int, int]:
    """The (in, out) pair of the ladder-vertex side holding ``slot``."""
    x = slot >> 2
    return (4 * x + 1, 4 * x) if (slot & 3) < 2 else (4 * x + 3, 4 * x + 2)


def _opposite(sd: tuple[int, int]) -> tuple[int, int]:
    return _side_at(sd[0] ^ 2)


def scheme_to_map(scheme: StrandedGraph) -> SpinCubicMap:
    """Read the spin map off a 2PI scheme built from N-vertices and planar junctions."""
    kinds, mate = scheme.kinds, scheme.mate
    r = scheme.root
    if r is None or any(k not in (ROOT, STANDARD, "Ne", "No") for k in kinds):
        raise StructureError("expected a rooted scheme of N-vertices")
    first = mate[4 * r] >> 2
    if kinds[first] == STANDARD:
        u, w = first, mate[4 * r + 1] >> 2
        if mate[4 * r] != 4 * u + 3 or mate[4 * r + 1] != 4 * w + 2 or mate[4 * w] != 4 * u + 1:
            raise StructureError("root is not in the melon configuration")
        sr, sb = _side_at(mate[4 * u]), _side_at(mate[4 * u + 2])
        if mate[sr[1]] != 4 * w + 1 or mate[sb[1]] != 4 * w + 3:
            raise StructureError("root is not in the melon configuration")
        far = -1
        if kinds.count(STANDARD) != 2:
            raise StructureError("unexpected standard vertices")
    else:
        sr = _side_at(mate[4 * r])
        sb = _side_at(mate[sr[1]])
        if mate[sb[1]] != 4 * r + 1 or sr[1] == 4 * r:
            raise StructureError("root is not in the cycle configuration")
        far = 1
        if STANDARD in kinds:
            raise StructureError("unexpected standard vertices")

    def kind(sd):
        return kinds[sd[0] >> 2]

    # junctions: cycles of sides linked out -> in
    rooted = {sr, sb}
    sides = [_side_at(4 * x + s) for x, k in enumerate(kinds) if k in ("Ne", "No") for s in (0, 2)]
    junction: dict = {}
    rings = []
    for sd in sides:
        if sd in rooted or sd in junction:
            continue
        ring = [sd]
        nxt = _side_at(mate[sd[1]])
        while nxt != sd:
            if nxt in rooted or len(ring) > 3 or (mate[sd[1]] >> 2) == r:
                raise StructureError("junction is not a three-cycle of N-sides")
            ring.append(nxt)
            nxt = _side_at(mate[nxt[1]])
        if len(ring) != 3:
            raise StructureError("junction is not a three-cycle of N-sides")
        for s in ring:
            junction[s] = len(rings)
        rings.append(ring)

    if not rings:
        if _opposite(sr) != sb:
            raise StructureError("genus-one scheme must have a single N-vertex")
        if (kind(sr) == "Ne") != (far == 1):
            raise StructureError("edge type disagrees with spins")
        return SpinCubicMap(CubicMap(()), (), far)

    # spins by propagation from the root, then checked on every edge
    spin = {}
    x0 = junction[_opposite(sr)]
    spin[x0] = 1 if kind(sr) == "Ne" else -1
    stack = [x0]
    while stack:
        j = stack.pop()
        for sd in rings[j]:
            o = _opposite(sd)
            if o in junction:
                want = spin[j] if kind(sd) == "Ne" else -spin[j]
                k = junction[o]
                if k not in spin:
                    spin[k] = want
                    stack.append(k)
                elif spin[k] != want:
                    raise StructureError("edge type disagrees with spins")
    if len(spin) != len(rings):
        raise StructureError("junctions are not connected")
    yb = spin[junction[_opposite(sb)]]
    if (kind(sb) == "Ne") != (yb == far):
        raise StructureError("edge type disagrees with spins")

    # darts in rotation order: the cycle order for +, reversed for -
    dart = {}
    for j, ring in enumerate(rings):
        rot = ring if spin[j] == 1 else [ring[0], ring[2], ring[1]]
        for k, sd in enumerate(rot):
            dart[sd] = 3 * j + k
    alpha = [0] * (3 * len(rings))
    for sd, d in dart.items():
        o = _opposite(sd)
        if o in dart:
            alpha[d] = dart[o]
    d0, d1 = dart[_opposite(sr)], dart[_opposite(sb)]
    alpha[d0], alpha[d1] = d1, d0
    canon, order = canonical_map(alpha, d0)
    m = CubicMap(canon)
    out = SpinCubicMap(m, tuple(spin[v] for v in order), far)
    out.validate()
    return out


# ---------------------------------------------------------------- Ising generating functions


@dataclass(frozen=True)
class IsingGF:
    """Coefficients ``[t^eps x^m]`` of the two boundary sectors."""

    zpp: dict
    zpm: dict
    max_genus: int

    def coefficient(self, sector: str, eps: int, m: int) -> int:
        return (self.zpp if sector == "++" else self.zpm).get((eps, m), 0)

    def at_x_one(self, sector: str) -> dict:
        z = self.zpp if sector == "++" else self.zpm
        out: Counter = Counter()
        for (eps, _), c in z.items():
            out[eps] += c
        return dict(out)


def ising_gfs(max_genus: int, bound: int | None = None) -> IsingGF:
    """Z_{++} and Z_{+-} truncated after genus ``max_genus``, by enumerating decorated maps."""
    zpp: Counter = Counter()
    zpm: Counter = Counter()
    for g in range(1, max_genus + 1):
        for sm in spin_maps(g, bound):
            (zpp if sm.far == 1 else zpm)[(sm.edges, sm.monochromatic())] += 1
    return IsingGF(dict(zpp), dict(zpm), max_genus)


def C_No(order: int) -> PowerSeries:
    u = PowerSeries.monomial(1, order)
    return u ** 3 / (1 - u ** 2)


def C_Ne(order: int) -> PowerSeries:
    u = PowerSeries.monomial(1, order)
    return u ** 2 / (1 - u ** 2)


def ising_side(z: IsingGF, genus: int, order: int) -> PowerSeries:
    """Genus-``genus`` part of the Ising formula as a series in ``u = lambda^2``.

    ``t = C_No(u) M^(-2/3)`` and ``x = 1/u``; the powers of ``M`` combine to
    ``M^(2-2g)`` for ``eps = 3g - 2``, and ``C_No^eps u^(-m)`` is expanded as
    ``u^(3 eps - m) (1 - u^2)^(-eps)``.
    """
    eps = 3 * genus - 2
    inv = (1 - PowerSeries.monomial(2, order)).inverse()
    total = PowerSeries.zero(order)
    for sector, extra in (("++", 0), ("+-", 1)):
        for (e, m), c in (z.zpp if sector == "++" else z.zpm).items():
            if e != eps:
                continue
            k = 3 * e - m + extra
            total = total + (inv ** e).shift(k) * c
    return total


def scheme_side(schemes: Sequence[StrandedGraph], order: int) -> PowerSeries:
    total = PowerSeries.zero(order)
    for s in schemes:
        total = total + scheme_gf(s, order)
    return total


def dominant_2pi_from_generator(g: int) -> dict:
    from .generate import generate_schemes

    return {c: s for c, s in generate_schemes(g).schemes_2pi.items() if _n_count(s) == 3 * g - 2}


def verify_ising_identity(max_genus: int = 2, order: int = 24) -> bool:
    """Check the Ising formula genus by genus against generated 2PI-dominant schemes."""
    z = ising_gfs(max_genus)
    for g in range(1, max_genus + 1):
        schemes = list(dominant_2pi_from_generator(g).values())
        if scheme_side(schemes, order) != ising_side(z, g, order):
            return False
    return True


# ---------------------------------------------------------------- triple-scaled 2PI series


def D_tilde_series(order: int) -> PowerSeries:
    """``(1/2) sum_n (kappa^2/16)^n M_n`` as a series in ``kappa^2``."""
    return PowerSeries.of([Fraction(count_cubic_maps(n), 2 * 16 ** n) for n in range(order + 1)], order)


def D_tilde_from_maps(order: int, bound: int | None = None) -> PowerSeries:
    """The same series from enumerated decorated maps at unit temperature."""
    z = ising_gfs(order + 1, bound)
    c = [Fraction(0)] * (order + 1)
    for zz in (z.zpp, z.zpm):
        for (eps, _), k in zz.items():
            n = (eps - 1) // 3
            # kappa^(-2/3) (kappa^(2/3)/4)^eps = kappa^(2n) / 4^eps
            c[n] += Fraction(k, 4 ** eps)
    return PowerSeries(tuple(c))


def critical_data(order: int = 200) -> dict:
    """Radius and coefficient exponent of the triple-scaled 2PI series from its coefficients."""
    coeffs = [float(c) for c in D_tilde_series(order).coeffs]
    rho2, beta = domb_sykes(coeffs)
    return {"kappa_c": math.sqrt(rho2), "kappa_c_exact": KAPPA_C, "exponent": beta}


def _log_weights(y_ratio: float, tol: float = 1e-17, max_terms: int = 50_000_000) -> np.ndarray:
    """Normalised weights ``M_n y^n`` with ``y = y_ratio * y_c``, cut where negligible."""
    # M_(n+1)/M_n = 2(3n+3)(3n+2)(3n+1)/((n+2)(2n+3)(2n+2)) -> 27/2
    eps = max(1.0 - y_ratio, 1e-300)
    terms = int(min(max_terms, max(200, 60.0 / eps)))
    n = np.arange(terms - 1, dtype=float)
    ratio = 2 * (3 * n + 3) * (3 * n + 2) * (3 * n + 1) / ((n + 2) * (2 * n + 3) * (2 * n + 2))
    logs = np.concatenate(([0.0], np.cumsum(np.log(ratio * (2 / 27) * y_ratio))))
    w = np.exp(logs)
    keep = w > tol * w.max()
    last = np.nonzero(keep)[0][-1] + 1
    return w[:last]


def _check_kappa(kappa: float) -> float:
    if not 0 < kappa < KAPPA_C:
        raise ValueError(f"kappa must lie in (0, {KAPPA_C})")
    return (kappa / KAPPA_C) ** 2


def genus_moments(kappa: float) -> tuple[float, float]:
    """``<g>`` and ``<g^2>`` with ``g = n + 1`` weighted by ``M_n (kappa^2/16)^n``."""
    w = _log_weights(_check_kappa(kappa))
    g = np.arange(1, len(w) + 1, dtype=float)
    z = w.sum()
    return float((g * w).sum() / z), float((g * g * w).sum() / z)


def mean_genus_2pi(kappa: float) -> float:
    return genus_moments(kappa)[0]


def variance_genus(kappa: float) -> float:
    m1, m2 = genus_moments(kappa)
    return m2 - m1 * m1


def second_moment_exponent(eps_values: Sequence[float] = (1e-4, 1e-5)) -> float:
    """Log-log slope of ``<g^2>`` against ``1 - kappa^2/kappa_c^2``."""
    xs, ys = [], []
    for e in eps_values:
        kappa = KAPPA_C * math.sqrt(1 - e)
        xs.append(math.log(e))
        ys.append(math.log(genus_moments(kappa)[1]))
    return float(np.polyfit(xs, ys, 1)[0])


@lru_cache(maxsize=None)
def all_2pi_dominant(g: int, bound: int | None = None) -> dict:
    """Schemes built from every decorated map of genus ``g``, keyed by canonical code."""
    from .stranded import canonical_code

    out = {}
    for sm in spin_maps(g, bound):
        s = map_to_scheme(sm)
        out[canonical_code(s)] = s
    return out

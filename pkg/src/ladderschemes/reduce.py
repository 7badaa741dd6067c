"""Melons, dipoles, ladders, schemes and the contraction and flip moves."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .stranded import (
    DIPOLE_SIDES,
    DIPOLE_TEMPLATES,
    LADDER_KINDS,
    ROOT,
    STANDARD,
    Editor,
    StrandedGraph,
    StructureError,
    components,
    face_counts,
    genus_grade,
    invariants,
    realize,
)

Scheme = StrandedGraph


# ---------------------------------------------------------------- melons


@dataclass(frozen=True)
class Melon:
    u: int  # vertex whose free leg is ingoing
    w: int  # vertex whose free leg is outgoing
    leg_in: int  # global slot of the free ingoing leg at u
    leg_out: int  # global slot of the free outgoing leg at w


def _melon_at(g: StrandedGraph, u: int, w: int) -> Melon | None:
    mate = g.mate
    fu = [s for s in range(4) if (mate[4 * u + s] >> 2) != w]
    fw = [s for s in range(4) if (mate[4 * w + s] >> 2) != u]
    if len(fu) != 1 or len(fw) != 1:
        return None
    a, b = fu[0], fw[0]
    if not a & 1 or b & 1:
        return None
    if (mate[4 * u + ((a + 1) & 3)] == 4 * w + ((b + 3) & 3)
            and mate[4 * u + ((a + 3) & 3)] == 4 * w + ((b + 1) & 3)
            and mate[4 * w + ((b + 2) & 3)] == 4 * u + ((a + 2) & 3)):
        return Melon(u, w, 4 * u + a, 4 * w + b)
    return None


def find_melons(g: StrandedGraph) -> list[Melon]:
    """Elementary melonic two-point subgraphs (two vertices, three parallel edges)."""
    out = []
    kinds, mate = g.kinds, g.mate
    for u in range(g.n):
        if kinds[u] != STANDARD:
            continue
        nbrs = [mate[4 * u + s] >> 2 for s in range(4)]
        for w in set(nbrs):
            if w != u and kinds[w] == STANDARD and nbrs.count(w) == 3:
                m = _melon_at(g, u, w)
                if m is not None and mate[m.leg_in] != m.leg_out:
                    out.append(m)
    return out


def closed_sides(g: StrandedGraph) -> list[tuple[int, int]]:
    """Ladder-vertex sides whose two legs are joined by an edge."""
    out = []
    for v in g.ladder_vertices():
        for side in (0, 2):
            if g.mate[4 * v + side] == 4 * v + side + 1:
                out.append((v, side))
    return out


def has_melon(g: StrandedGraph) -> bool:
    """True when ``g`` or its realization contains an elementary melon."""
    return bool(find_melons(g)) or bool(closed_sides(g))


def remove_melon(g: StrandedGraph, m: Melon) -> StrandedGraph:
    ed = Editor(g)
    t = g.mate[m.leg_in]
    h = g.mate[m.leg_out]
    ed.remove(m.u)
    ed.remove(m.w)
    ed.connect(t, h)
    return ed.freeze()


@dataclass(frozen=True)
class MelonRemoval:
    step: int
    size_before: int


def melon_core(g: StrandedGraph, order: str = "first") -> tuple[StrandedGraph, list[MelonRemoval]]:
    """Remove elementary melons until none is left.

    ``order`` picks the first or the last melon found at each step; the core
    does not depend on the choice.
    """
    history = []
    while True:
        ms = find_melons(g)
        if not ms:
            return g, history
        m = ms[0] if order == "first" else ms[-1]
        history.append(MelonRemoval(len(history), g.n))
        g = remove_melon(g, m)


def insert_melon(g: StrandedGraph, tail: int) -> StrandedGraph:
    """Put an elementary melon on the edge leaving global slot ``tail``."""
    ed = Editor(g)
    u = ed.add(STANDARD)
    w = ed.add(STANDARD)
    ed.insert_side(tail, 4 * u + 3, 4 * w + 2)
    ed.connect(4 * u + 0, 4 * w + 1)
    ed.connect(4 * u + 2, 4 * w + 3)
    ed.connect(4 * w + 0, 4 * u + 1)
    return ed.freeze()


# ---------------------------------------------------------------- dipoles and units


@dataclass(frozen=True)
class Unit:
    """A rung-like piece: a dipole on two standard vertices or one ladder-vertex.

    ``kind`` is ``"dN"``, ``"dL"``, ``"dR"`` for dipoles and the ladder type for
    ladder-vertices.  Sides are ``(in-leg, out-leg)`` global slots.
    """

    kind: str
    vertices: tuple[int, ...]
    side_p: tuple[int, int]
    side_q: tuple[int, int]
    internal: tuple[int, ...] = ()  # tail slots of the internal edges

    @property
    def is_dipole(self) -> bool:
        return self.kind.startswith("d")

    @property
    def letter(self) -> str:
        return self.kind[1:] if self.is_dipole else self.kind


Dipole = Unit


def _match_dipole(g: StrandedGraph, u: int, w: int, e1: int, e2: int) -> Unit | None:
    actual = {(e1, g.mate[e1]), (e2, g.mate[e2])}
    for letter, tpl in DIPOLE_TEMPLATES.items():
        for roles in ((u, w), (w, u)):
            for o0 in (0, 2):
                for o1 in (0, 2):
                    offs = (o0, o1)
                    mapped = {
                        (4 * roles[a] + ((sa + offs[a]) & 3), 4 * roles[b] + ((sb + offs[b]) & 3))
                        for (a, sa), (b, sb) in tpl
                    }
                    if mapped == actual:
                        p, q = DIPOLE_SIDES[letter]
                        side = lambda pair: tuple(4 * roles[x] + ((s + offs[x]) & 3) for x, s in pair)
                        return Unit("d" + letter, (u, w), side(p), side(q), tuple(sorted((e1, e2))))
    return None


def find_dipoles(g: StrandedGraph) -> list[Unit]:
    """All dipoles: two parallel edges between standard vertices bounding a face of length two."""
    out = []
    kinds, mate = g.kinds, g.mate
    for u in range(g.n):
        if kinds[u] != STANDARD:
            continue
        by_nbr: dict[int, list[int]] = {}
        for s in range(4 * u, 4 * u + 4):
            w = mate[s] >> 2
            if w > u and kinds[w] == STANDARD:
                by_nbr.setdefault(w, []).append(s if not s & 1 else mate[s])
        for w, es in by_nbr.items():
            for i in range(len(es)):
                for j in range(i + 1, len(es)):
                    d = _match_dipole(g, u, w, es[i], es[j])
                    if d is not None:
                        out.append(d)
    return out


def ladder_vertex_unit(g: StrandedGraph, v: int) -> Unit:
    return Unit(g.kinds[v], (v,), (4 * v + 1, 4 * v), (4 * v + 3, 4 * v + 2))


def units(g: StrandedGraph) -> list[Unit]:
    return find_dipoles(g) + [ladder_vertex_unit(g, v) for v in g.ladder_vertices()]


# ---------------------------------------------------------------- ladder types


def combine_types(kinds: Sequence[str]) -> str:
    """Type of the ladder formed by chaining units of the given kinds."""
    fams = set()
    parity = 0
    for k in kinds:
        if k == "B":
            return "B"
        letter = k[1:] if k.startswith("d") else k
        if letter in ("N", "Ne", "No"):
            fams.add("N")
            parity ^= 1 if letter in ("N", "No") else 0
        else:
            fams.add(letter)
    if len(fams) > 1:
        return "B"
    fam = fams.pop()
    if fam == "N":
        return "No" if parity else "Ne"
    return fam


@dataclass(frozen=True)
class Ladder:
    rungs: tuple[Unit, ...]
    side_a: tuple[int, int]
    side_b: tuple[int, int]

    @property
    def kind(self) -> str:
        return combine_types([u.kind for u in self.rungs])

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for u in self.rungs for v in u.vertices)


def _rail(mate, x: tuple[int, int], y: tuple[int, int]) -> bool:
    return mate[x[1]] == y[0] and mate[y[1]] == x[0]


def maximal_ladders(g: StrandedGraph, include_single: bool = False) -> list[Ladder]:
    """Chains of at least two units joined side to side by pairs of rails.

    With ``include_single`` lone ladder-vertices are returned as well.
    """
    mate = g.mate
    us = units(g)
    # side leg -> (unit index, side index)
    leg_owner = {}
    for i, u in enumerate(us):
        for k, side in enumerate((u.side_p, u.side_q)):
            leg_owner[side[0]] = (i, k)
    link: dict[tuple[int, int], tuple[int, int]] = {}
    for i, u in enumerate(us):
        for k, side in enumerate((u.side_p, u.side_q)):
            partner = mate[side[1]]
            if partner in leg_owner:
                j, l = leg_owner[partner]
                other = (us[j].side_p, us[j].side_q)[l]
                if j != i and _rail(mate, side, other) and not set(u.vertices) & set(us[j].vertices):
                    link[(i, k)] = (j, l)
    seen = set()
    out = []
    used_vertices: set[int] = set()
    for i in range(len(us)):
        if i in seen:
            continue
        # walk to one end of the chain
        start, start_side = i, 0
        steps = 0
        while (start, start_side) in link and steps <= len(us):
            j, l = link[(start, start_side)]
            start, start_side = j, 1 - l
            steps += 1
        if steps > len(us):
            raise StructureError("closed ring of rungs")
        # start_side is the free side of the first unit
        chain = [start]
        outer_a = (us[start].side_p, us[start].side_q)[start_side]
        cur, cur_side = start, 1 - start_side
        while (cur, cur_side) in link:
            j, l = link[(cur, cur_side)]
            chain.append(j)
            cur, cur_side = j, 1 - l
        outer_b = (us[cur].side_p, us[cur].side_q)[cur_side]
        seen.update(chain)
        if len(chain) >= 2 or (include_single and not us[chain[0]].is_dipole):
            vs = {v for c in chain for v in us[c].vertices}
            if vs & used_vertices:
                raise StructureError("overlapping ladders")
            used_vertices |= vs
            out.append(Ladder(tuple(us[c] for c in chain), outer_a, outer_b))
    # dipoles sharing vertices with a chosen ladder are absorbed by it
    return out


def to_scheme(g: StrandedGraph, check: bool = True) -> Scheme:
    """Replace every maximal ladder by a ladder-vertex of its type."""
    if check and has_melon(g):
        raise StructureError("schemes are defined for melon-free graphs")
    ladders = maximal_ladders(g)
    if not ladders:
        return g
    drop = set()
    legmap = {}
    kinds = list(g.kinds)
    for lad in ladders:
        drop.update(lad.vertices)
        x = len(kinds)
        kinds.append(lad.kind)
        legmap[lad.side_a[0]] = 4 * x + 1
        legmap[lad.side_a[1]] = 4 * x + 0
        legmap[lad.side_b[0]] = 4 * x + 3
        legmap[lad.side_b[1]] = 4 * x + 2
    return _rebuild(g, kinds, drop, legmap)


def _rebuild(g: StrandedGraph, kinds: list, drop: set, legmap: dict, check: bool = False) -> StrandedGraph:
    ed = Editor()
    ed.kinds = [None if v in drop else k for v, k in enumerate(kinds)]
    ed.mate = [-1] * (4 * len(kinds))
    for t, h in g.edges():
        if t in legmap or h in legmap or ((t >> 2) not in drop and (h >> 2) not in drop):
            ed.connect(legmap.get(t, t), legmap.get(h, h))
    return ed.freeze(check)


# ---------------------------------------------------------------- contraction


def _unit_of(g: StrandedGraph, target) -> tuple[set, tuple[int, int], tuple[int, int], str]:
    if isinstance(target, Ladder):
        return set(target.vertices), target.side_a, target.side_b, target.kind
    if isinstance(target, Unit):
        return set(target.vertices), target.side_p, target.side_q, target.letter
    if isinstance(target, int) and g.kinds[target] in LADDER_KINDS:
        u = ladder_vertex_unit(g, target)
        return {target}, u.side_p, u.side_q, u.kind
    raise StructureError(f"cannot contract {target!r}")


def contract(g: StrandedGraph, target) -> tuple[StrandedGraph, ...]:
    """Contract a dipole, ladder or ladder-vertex.

    Each side is reconnected: the edge into its in-leg is joined to the edge
    out of its out-leg.  If this disconnects the graph, the component without
    the original root receives a new root on its reconnected edge.
    """
    verts, a, b, _ = _unit_of(g, target)
    kinds = list(g.kinds) + ["M", "M"]
    ma, mb = g.n, g.n + 1
    legmap = {a[0]: 4 * ma + 1, a[1]: 4 * ma, b[0]: 4 * mb + 1, b[1]: 4 * mb}
    marked = _rebuild(g, kinds, verts, legmap)
    if marked.mate[4 * (marked.n - 2)] == 4 * (marked.n - 2) + 1 or marked.mate[4 * (marked.n - 1)] == 4 * (marked.n - 1) + 1:
        raise StructureError("contraction of a structure with a closed side")
    parts = components(marked)
    results = []
    root_first = sorted(parts, key=lambda p: ROOT not in p.kinds)
    for p in root_first:
        ed = Editor(p)
        markers = [v for v, k in enumerate(p.kinds) if k == "M"]
        if ROOT in p.kinds:
            for m in markers:
                ed.smooth(m)
        else:
            ed.kinds[markers[0]] = ROOT
            for m in markers[1:]:
                ed.smooth(m)
        results.append(ed.freeze())
    return tuple(results)


def classify_dipole(g: StrandedGraph, target) -> tuple[str, str]:
    """Type and role (``separating``, ``connecting`` or ``neither``) of a dipole or ladder-vertex."""
    _, _, _, kind = _unit_of(g, target)
    res = contract(g, target)
    if len(res) == 2:
        return kind, "separating"
    if kind in ("N", "Ne", "No"):
        phi_before = face_counts(g)[2]
        phi_after = face_counts(res[0])[2]
        internal = _internal_loops(g, target)
        if phi_after == phi_before - internal - 1:
            return kind, "connecting"
    return kind, "neither"


def _internal_loops(g: StrandedGraph, target) -> int:
    """O(D)-loops lying entirely inside the contracted structure (in its realization)."""
    if isinstance(target, Unit) and target.is_dipole:
        return 1
    verts, a, b, kind = _unit_of(g, target)
    if isinstance(target, Ladder):
        return sum(_internal_loops(g, u) for u in target.rungs)
    # minimal realization of a ladder-vertex: one loop per N rung
    from .stranded import MINIMAL_RUNGS

    return MINIMAL_RUNGS[kind].count("N")


# ---------------------------------------------------------------- flips


def flip(g: StrandedGraph, cut: tuple[int, int]) -> tuple[StrandedGraph, StrandedGraph]:
    """Cut two edges forming a cut, reconnect each side, and root the side without the root.

    ``cut`` holds the tail slots of the two edges.  Returns the rooted side
    first and the newly rooted side second.
    """
    if g.root is None:
        raise StructureError("flips act on rooted graphs")
    ed = Editor(g)
    t1, h1 = ed.cut(cut[0])
    t2, h2 = ed.cut(cut[1])
    side = _side_of(ed.mate, g.root)
    if len(side) == g.n:
        raise StructureError("the two edges do not form a cut")
    if (t1 >> 2) in side:
        x_out, y_in, y_out, x_in = t1, h1, t2, h2
    else:
        x_out, y_in, y_out, x_in = t2, h2, t1, h1
    if (x_out >> 2) not in side or (x_in >> 2) not in side or (y_out >> 2) in side or (y_in >> 2) in side:
        raise StructureError("cut edges do not cross between the two sides")
    ed.connect(x_out, x_in)
    r = ed.add("M")
    ed.connect(y_out, 4 * r + 1)
    ed.connect(4 * r, y_in)
    whole = ed.freeze()
    parts = components(whole)
    if len(parts) != 2:
        raise StructureError("the two edges do not form a cut")
    parts.sort(key=lambda p: ROOT not in p.kinds)
    g1, g2 = parts
    g2 = StrandedGraph(tuple(ROOT if k == "M" else k for k in g2.kinds), g2.mate)
    return g1, g2


def _side_of(mate: Sequence[int], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for s in range(4 * v, 4 * v + 4):
            m = mate[s]
            if m >= 0 and (m >> 2) not in seen:
                seen.add(m >> 2)
                stack.append(m >> 2)
    return seen


# ---------------------------------------------------------------- invariant deltas


@dataclass(frozen=True)
class ContractionRecord:
    kind: str
    separating: bool
    before: tuple[int, int, float]
    after: tuple[tuple[int, int, float], ...]
    sigma: int | None
    holds: bool


def _gle(g: StrandedGraph) -> tuple[int, int, float]:
    inv = invariants(g)
    return inv.g, inv.ell, inv.omega


def contraction_record(g: StrandedGraph, target) -> ContractionRecord:
    """Contract ``target`` and test the expected change of genus, grade and degree.

    Separating targets split the invariants additively.  Otherwise, with
    ``sigma = +1`` or ``-1`` read off the grade change: an N target lowers
    the genus by one, the grade by ``2(sigma+1)``; an L or R target lowers
    the genus by ``(sigma+1)/2``, the grade by ``sigma+3``; a B target lowers
    them by 1 and 4.  The degree always drops by ``sigma+2`` (3 for B).
    """
    _, _, _, kind = _unit_of(g, target)
    g0, l0, w0 = _gle(g)
    res = contract(g, target)
    after = tuple(_gle(r) for r in res)
    if len(res) == 2:
        (g1, l1, w1), (g2, l2, w2) = after
        ok = (g1 + g2, l1 + l2, w1 + w2) == (g0, l0, w0)
        return ContractionRecord(kind, True, (g0, l0, w0), after, None, ok)
    g1, l1, w1 = after[0]
    if kind == "B":
        ok = (g1, l1, w1) == (g0 - 1, l0 - 4, w0 - 3)
        return ContractionRecord(kind, False, (g0, l0, w0), after, 1, ok)
    if kind in ("N", "Ne", "No"):
        sigma = (l0 - l1) // 2 - 1
        ok = sigma in (1, -1) and (g1, l1, w1) == (g0 - 1, l0 - 2 * (sigma + 1), w0 - (sigma + 2))
    else:
        sigma = l0 - l1 - 3
        ok = sigma in (1, -1) and (g1, l1, w1) == (g0 - (sigma + 1) // 2, l0 - (sigma + 3), w0 - (sigma + 2))
    return ContractionRecord(kind, False, (g0, l0, w0), after, sigma, ok)


def flip_holds(g: StrandedGraph, cut: tuple[int, int]) -> bool:
    """Flip additivity, plus two more faces and one more loop in total."""
    g1, g2 = flip(g, cut)
    a, b, c = _gle(g), _gle(g1), _gle(g2)
    additive = (b[0] + c[0], b[1] + c[1], b[2] + c[2]) == a
    f0 = face_counts(realize(g))
    f1, f2 = face_counts(realize(g1)), face_counts(realize(g2))
    faces = (f1[0] + f1[1] + f2[0] + f2[1]) - (f0[0] + f0[1]) == 2
    loops = f1[2] + f2[2] - f0[2] == 1
    return additive and faces and loops

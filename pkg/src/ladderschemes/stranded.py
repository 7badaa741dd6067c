"""Rooted stranded graphs: storage, face tracing, invariants and canonical codes.

A graph is stored as a tuple of vertex kinds and a flat ``mate`` array over
slots.  Vertex ``v`` owns the global slots ``4*v .. 4*v+3``; two-slot
vertices (the root and internal markers) only use the first two.  Even slots
are outgoing, odd slots are ingoing, and ``mate[s]`` is the slot at the other
end of the edge through ``s`` (``-1`` for unused slots).

Besides standard four-slot vertices (kind ``"S"``) and the root (``"r"``),
a graph may carry ladder-vertices (``"Ne"``, ``"No"``, ``"L"``, ``"R"``,
``"B"``).  Their slots are ``0 = A_out, 1 = A_in, 2 = B_out, 3 = B_in``.
Face tracing and invariants are computed on the minimal realization, where
each ladder-vertex is replaced by a short ladder of dipoles.
"""

from __future__ import annotations

import json
import random
from array import array
from dataclasses import dataclass, field
from typing import Iterable, Sequence

STANDARD = "S"
ROOT = "r"
LADDER_KINDS = ("Ne", "No", "L", "R", "B")
FOUR_SLOT = frozenset(("S",) + LADDER_KINDS)

# kinds with two slots: the root plus markers used by contraction and templates
_MARKERS = ("M", "K1", "K2", "K3")
TWO_SLOT = frozenset((ROOT,) + _MARKERS)

_KIND_CODE = {k: i for i, k in enumerate(("S", "r", "Ne", "No", "L", "R", "B") + _MARKERS)}

# strand routing at a standard vertex: corners (0,1),(2,3) carry L strands,
# (1,2),(3,0) carry R strands, the internal strand joins opposite slots
_PERM_L = (1, 0, 3, 2)
_PERM_R = (3, 2, 1, 0)
_PERM_I = (2, 3, 0, 1)
_PASS = (1, 0, -1, -1)

# dipole templates: internal edges as (tail slot of u or w, head slot), plus
# the two sides given as (in-leg, out-leg) with vertex 0 = u and 1 = w
DIPOLE_TEMPLATES = {
    "N": (((0, 0), (1, 1)), ((0, 2), (1, 3))),
    "L": (((0, 0), (1, 1)), ((1, 0), (0, 1))),
    "R": (((0, 2), (1, 1)), ((1, 2), (0, 1))),
}
DIPOLE_SIDES = {
    "N": (((0, 1), (1, 0)), ((0, 3), (1, 2))),
    "L": (((0, 3), (1, 2)), ((1, 3), (0, 2))),
    "R": (((0, 3), (1, 0)), ((1, 3), (0, 0))),
}
MINIMAL_RUNGS = {"Ne": "NN", "No": "NNN", "L": "LL", "R": "RR", "B": "NL"}


class StructureError(ValueError):
    """Raised when a graph violates the structural invariants."""


def slot_count(kind: str) -> int:
    return 2 if kind in TWO_SLOT else 4


@dataclass(frozen=True)
class StrandedGraph:
    kinds: tuple[str, ...]
    mate: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.kinds)

    @property
    def root(self) -> int | None:
        try:
            return self.kinds.index(ROOT)
        except ValueError:
            return None

    @property
    def v(self) -> int:
        """Number of standard vertices."""
        return self.kinds.count(STANDARD)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (tail slot, head slot) global slot pairs."""
        return [(s, m) for s, m in enumerate(self.mate) if m >= 0 and not s & 1]

    def edge_list(self) -> list[tuple[int, int, int, int]]:
        return [(t >> 2, t & 3, h >> 2, h & 3) for t, h in self.edges()]

    def ladder_vertices(self) -> list[int]:
        return [i for i, k in enumerate(self.kinds) if k in LADDER_KINDS]

    def __repr__(self) -> str:
        return f"StrandedGraph(kinds={''.join(k if len(k) == 1 else f'[{k}]' for k in self.kinds)}, edges={self.edge_list()})"


def build(kinds: Sequence[str], edges: Iterable[tuple[int, int, int, int]]) -> StrandedGraph:
    """Build and validate a graph from ``(tail vertex, tail slot, head vertex, head slot)`` tuples."""
    kinds = tuple(kinds)
    mate = [-1] * (4 * len(kinds))
    for tv, ts, hv, hs in edges:
        if ts & 1 or not hs & 1:
            raise StructureError(f"edge {(tv, ts, hv, hs)} must run from an outgoing to an ingoing slot")
        t, h = 4 * tv + ts, 4 * hv + hs
        if ts >= slot_count(kinds[tv]) or hs >= slot_count(kinds[hv]):
            raise StructureError(f"slot out of range in edge {(tv, ts, hv, hs)}")
        if mate[t] >= 0 or mate[h] >= 0:
            raise StructureError(f"slot used twice in edge {(tv, ts, hv, hs)}")
        mate[t], mate[h] = h, t
    g = StrandedGraph(kinds, tuple(mate))
    validate(g)
    return g


def validate(g: StrandedGraph) -> None:
    if g.kinds.count(ROOT) > 1:
        raise StructureError("more than one root vertex")
    for v, k in enumerate(g.kinds):
        if k not in _KIND_CODE:
            raise StructureError(f"unknown vertex kind {k!r}")
        for s in range(4):
            m = g.mate[4 * v + s]
            if s < slot_count(k):
                if m < 0:
                    raise StructureError(f"dangling slot {s} at vertex {v}")
                if g.mate[m] != 4 * v + s or (m & 1) == (s & 1):
                    raise StructureError(f"inconsistent edge at vertex {v} slot {s}")
            elif m >= 0:
                raise StructureError(f"unused slot {s} of vertex {v} is paired")


# ---------------------------------------------------------------- realization


def dipole_chain(rungs: str, first: int) -> tuple[list[tuple[int, int, int, int]], tuple[int, int], tuple[int, int]]:
    """Internal edges of a ladder with the given rung letters.

    Vertices are numbered from ``first``.  Returns the edges, and the outer
    sides A (of the first rung) and B (of the last rung) as
    ``(in-leg global slot, out-leg global slot)``.
    """
    edges = []
    sides = []
    for i, letter in enumerate(rungs):
        u = first + 2 * i
        base = (u, u + 1)
        for (a, sa), (b, sb) in DIPOLE_TEMPLATES[letter]:
            edges.append((base[a], sa, base[b], sb))
        p, q = DIPOLE_SIDES[letter]
        sides.append(tuple((4 * base[x] + s) for x, s in p) + tuple((4 * base[x] + s) for x, s in q))
    for i in range(len(rungs) - 1):
        q_in, q_out = sides[i][2], sides[i][3]
        p_in, p_out = sides[i + 1][0], sides[i + 1][1]
        edges.append((q_out >> 2, q_out & 3, p_in >> 2, p_in & 3))
        edges.append((p_out >> 2, p_out & 3, q_in >> 2, q_in & 3))
    return edges, (sides[0][0], sides[0][1]), (sides[-1][2], sides[-1][3])


def realize(g: StrandedGraph, rungs: dict[int, str] | None = None) -> StrandedGraph:
    """Replace every ladder-vertex by a ladder of dipoles.

    ``rungs`` maps ladder-vertex ids to explicit rung strings; the default is
    the minimal realization of each type.
    """
    lvs = g.ladder_vertices()
    if not lvs:
        return g
    rungs = rungs or {}
    keep = [i for i in range(g.n) if g.kinds[i] not in LADDER_KINDS]
    new_id = {v: i for i, v in enumerate(keep)}
    kinds = [g.kinds[v] for v in keep]
    # where each old slot of a ladder-vertex now lives
    leg = {}
    edges = []
    for lv in lvs:
        word = rungs.get(lv, MINIMAL_RUNGS[g.kinds[lv]])
        inner, (a_in, a_out), (b_in, b_out) = dipole_chain(word, len(kinds))
        kinds.extend(["S"] * (2 * len(word)))
        edges.extend(inner)
        leg[4 * lv + 0], leg[4 * lv + 1] = a_out, a_in
        leg[4 * lv + 2], leg[4 * lv + 3] = b_out, b_in
    for t, h in g.edges():
        nt = leg[t] if t in leg else 4 * new_id[t >> 2] + (t & 3)
        nh = leg[h] if h in leg else 4 * new_id[h >> 2] + (h & 3)
        edges.append((nt >> 2, nt & 3, nh >> 2, nh & 3))
    return build(kinds, edges)


# ---------------------------------------------------------------- faces


@dataclass(frozen=True)
class FaceCensus:
    f_L: int
    f_R: int
    phi: int
    faces_L: tuple[tuple[int, ...], ...]
    faces_R: tuple[tuple[int, ...], ...]
    loops: tuple[tuple[int, ...], ...]
    loop_lengths: tuple[int, ...]


def _cycles(kinds: Sequence[str], mate: Sequence[int], perm: tuple[int, ...]) -> tuple[list[tuple[int, ...]], list[int]]:
    seen = bytearray(len(mate))
    faces = []
    lengths = []
    for s in range(len(mate)):
        if mate[s] < 0 or seen[s]:
            continue
        path = []
        passes = 0
        cur = s
        while True:
            seen[cur] = 1
            path.append(cur)
            m = mate[cur]
            seen[m] = 1
            v = m >> 2
            if kinds[v] == STANDARD:
                passes += 1
                nxt = (v << 2) | perm[m & 3]
            else:
                nxt = (v << 2) | _PASS[m & 3]
            if nxt == s:
                break
            cur = nxt
        faces.append(tuple(path))
        lengths.append(passes)
    return faces, lengths


def trace_faces(g: StrandedGraph) -> FaceCensus:
    """Decompose all strands into L-faces, R-faces and O(D)-loops."""
    validate(g)
    g = realize(g)
    fl, _ = _cycles(g.kinds, g.mate, _PERM_L)
    fr, _ = _cycles(g.kinds, g.mate, _PERM_R)
    loops, lengths = _cycles(g.kinds, g.mate, _PERM_I)
    return FaceCensus(len(fl), len(fr), len(loops), tuple(fl), tuple(fr), tuple(loops), tuple(lengths))


def face_counts(g: StrandedGraph) -> tuple[int, int, int]:
    """(f_L, f_R, phi) without building the full census."""
    g = realize(g)
    return (len(_cycles(g.kinds, g.mate, _PERM_L)[0]), len(_cycles(g.kinds, g.mate, _PERM_R)[0]),
            len(_cycles(g.kinds, g.mate, _PERM_I)[0]))


@dataclass(frozen=True)
class Invariants:
    v: int
    e: int
    g: int
    ell: int
    omega: float

    @property
    def degree(self) -> float:
        return self.omega


def invariants_from_counts(v: int, f: int, phi: int) -> tuple[int, int]:
    """Genus and grade from the vertex, face and loop counts."""
    two_g = 2 + v - f
    ell = 2 + two_g + v - 2 * phi
    if two_g < 0 or two_g & 1 or ell < 0:
        raise StructureError(f"inconsistent census v={v} f={f} phi={phi}")
    return two_g // 2, ell


def invariants(g: StrandedGraph) -> Invariants:
    if not is_connected(g):
        raise StructureError("invariants are defined for connected graphs")
    r = realize(g)
    fl, fr, phi = face_counts(r)
    v = r.v
    genus, ell = invariants_from_counts(v, fl + fr, phi)
    omega = 3 + 1.5 * v - (fl + fr) - phi
    if omega != genus + ell / 2:
        raise StructureError("degree formulas disagree")
    return Invariants(v=v, e=len(r.edges()), g=genus, ell=ell, omega=omega)


def genus_grade(g: StrandedGraph) -> tuple[int, int]:
    r = realize(g)
    fl, fr, phi = face_counts(r)
    return invariants_from_counts(r.v, fl + fr, phi)


# ---------------------------------------------------------------- connectivity


def _reach(g: StrandedGraph, start: int) -> list[int]:
    seen = [False] * g.n
    seen[start] = True
    stack = [start]
    order = []
    mate = g.mate
    while stack:
        v = stack.pop()
        order.append(v)
        for s in range(4 * v, 4 * v + 4):
            m = mate[s]
            if m >= 0 and not seen[m >> 2]:
                seen[m >> 2] = True
                stack.append(m >> 2)
    return order


def is_connected(g: StrandedGraph) -> bool:
    return g.n == 0 or len(_reach(g, 0)) == g.n


def subgraph(g: StrandedGraph, vertices: Sequence[int]) -> StrandedGraph:
    """Induced graph on a union of components, with dense ids in the given order."""
    new = {v: i for i, v in enumerate(vertices)}
    mate = [-1] * (4 * len(vertices))
    for v in vertices:
        for s in range(4):
            m = g.mate[4 * v + s]
            if m >= 0:
                mate[4 * new[v] + s] = 4 * new[m >> 2] + (m & 3)
    return StrandedGraph(tuple(g.kinds[v] for v in vertices), tuple(mate))


def components(g: StrandedGraph) -> list[StrandedGraph]:
    seen = set()
    out = []
    for v in range(g.n):
        if v not in seen:
            comp = sorted(_reach(g, v))
            seen.update(comp)
            out.append(subgraph(g, comp))
    return out


# ---------------------------------------------------------------- canonical code


def canonical_order(g: StrandedGraph) -> tuple[list[int], list[int]]:
    """Breadth-first labelling seeded at the root.

    Returns the vertex order and, per vertex, the rotation offset (0 or 2)
    that makes its entering slot relative slot 0 or 1.
    """
    r = g.root
    if r is None:
        raise StructureError("canonical code requires a rooted graph")
    mate, kinds = g.mate, g.kinds
    label = [-1] * g.n
    offset = [0] * g.n
    order = [r]
    label[r] = 0
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        off = offset[v]
        deg = 2 if kinds[v] in TWO_SLOT else 4
        for j in range(deg):
            m = mate[(v << 2) | ((off + j) & 3)]
            w = m >> 2
            if label[w] < 0:
                label[w] = len(order)
                order.append(w)
                if kinds[w] not in TWO_SLOT:
                    offset[w] = (m & 3) & 2
    if len(order) != g.n:
        raise StructureError("canonical code requires a connected graph")
    return order, offset


def canonical_code(g: StrandedGraph) -> bytes:
    order, offset = canonical_order(g)
    mate, kinds = g.mate, g.kinds
    label = [0] * g.n
    for i, v in enumerate(order):
        label[v] = i
    out = array("H", [g.n])
    out.extend(_KIND_CODE[kinds[v]] for v in order)
    for v in order:
        off = offset[v]
        deg = 2 if kinds[v] in TWO_SLOT else 4
        for j in range(deg):
            m = mate[(v << 2) | ((off + j) & 3)]
            w = m >> 2
            out.append(label[w])
            out.append(((m & 3) - offset[w]) & 3)
    return out.tobytes()


def canonical_form(g: StrandedGraph) -> StrandedGraph:
    """Relabel ``g`` into its canonical breadth-first labelling."""
    order, offset = canonical_order(g)
    label = [0] * g.n
    for i, v in enumerate(order):
        label[v] = i
    mate = [-1] * (4 * g.n)
    for v in order:
        for s in range(slot_count(g.kinds[v])):
            m = g.mate[4 * v + s]
            w = m >> 2
            mate[4 * label[v] + ((s - offset[v]) & 3)] = 4 * label[w] + (((m & 3) - offset[w]) & 3)
    return StrandedGraph(tuple(g.kinds[v] for v in order), tuple(mate))


def relabel(g: StrandedGraph, perm: Sequence[int], rotate: Sequence[int]) -> StrandedGraph:
    """Apply a vertex permutation (old -> new) and per-vertex rotations by 0 or 2."""
    mate = [-1] * (4 * g.n)
    kinds = [""] * g.n
    for v in range(g.n):
        kinds[perm[v]] = g.kinds[v]
        rv = rotate[v] if g.kinds[v] not in TWO_SLOT else 0
        for s in range(slot_count(g.kinds[v])):
            m = g.mate[4 * v + s]
            w = m >> 2
            rw = rotate[w] if g.kinds[w] not in TWO_SLOT else 0
            mate[4 * perm[v] + ((s + rv) & 3)] = 4 * perm[w] + (((m & 3) + rw) & 3)
    return StrandedGraph(tuple(kinds), tuple(mate))


def random_relabel(g: StrandedGraph, rng: random.Random) -> StrandedGraph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return relabel(g, perm, [rng.choice((0, 2)) for _ in range(g.n)])


# ---------------------------------------------------------------- two-edge cuts


def two_edge_cuts(g: StrandedGraph, seed: int = 0x5EED) -> list[tuple[int, int]]:
    """All pairs of edges (by tail slot) whose removal disconnects the graph.

    Uses random cycle-space labels: two edges of a bridgeless graph form a
    cut exactly when their labels coincide.  Candidate pairs are confirmed by
    a removal check, so the output is exact.
    """
    n = g.n
    mate = g.mate
    edges = g.edges()
    if n == 0:
        return []
    rng = random.Random(seed)
    parent_edge = [-1] * n
    depth = [-1] * n
    order = []
    depth[0] = 0
    stack = [0]
    tree = set()
    while stack:
        v = stack.pop()
        order.append(v)
        for s in range(4 * v, 4 * v + 4):
            m = mate[s]
            if m < 0:
                continue
            w = m >> 2
            if depth[w] < 0:
                depth[w] = depth[v] + 1
                e = s if not s & 1 else m
                parent_edge[w] = e
                tree.add(e)
                stack.append(w)
    label = {}
    acc = [0] * n
    for t, h in edges:
        if t not in tree:
            x = rng.getrandbits(64)
            label[t] = x
            acc[t >> 2] ^= x
            acc[h >> 2] ^= x
    for v in reversed(order):
        e = parent_edge[v]
        if e >= 0:
            label[e] = acc[v]
            other = (mate[e] >> 2) if (e >> 2) == v else (e >> 2)
            acc[other] ^= acc[v]
    by_label: dict[int, list[int]] = {}
    for e, x in label.items():
        by_label.setdefault(x, []).append(e)
    cuts = []
    for group in by_label.values():
        group.sort()
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                if _separates(g, group[i], group[j]):
                    cuts.append((group[i], group[j]))
    return sorted(cuts)


def _separates(g: StrandedGraph, e1: int, e2: int) -> bool:
    removed = {e1, g.mate[e1], e2, g.mate[e2]}
    seen = [False] * g.n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        v = stack.pop()
        for s in range(4 * v, 4 * v + 4):
            m = g.mate[s]
            if m >= 0 and s not in removed and not seen[m >> 2]:
                seen[m >> 2] = True
                count += 1
                stack.append(m >> 2)
    return count < g.n


def is_2pi(g: StrandedGraph) -> bool:
    """True when every two-edge cut consists of the two root edges."""
    r = g.root
    for e1, e2 in two_edge_cuts(g):
        if r is not None and _touches(g, e1, r) and _touches(g, e2, r):
            continue
        return False
    return True


def _touches(g: StrandedGraph, e: int, v: int) -> bool:
    return (e >> 2) == v or (g.mate[e] >> 2) == v


# ---------------------------------------------------------------- JSON


def to_json(g: StrandedGraph) -> dict:
    out = {"vertices": g.n, "root": g.root, "edges": [list(e) for e in g.edge_list()]}
    lvs = g.ladder_vertices()
    if lvs:
        out["ladder_vertices"] = [
            {"vertex": v, "type": g.kinds[v], "twist": False, "legs": ["A_out", "A_in", "B_out", "B_in"]}
            for v in lvs
        ]
    return out


def from_json(data: dict | str) -> StrandedGraph:
    if isinstance(data, str):
        data = json.loads(data)
    n = data["vertices"]
    kinds = ["S"] * n
    if data.get("root") is not None:
        kinds[data["root"]] = ROOT
    for lv in data.get("ladder_vertices", []):
        if lv.get("twist"):
            raise StructureError("twisted ladder-vertices do not occur with oriented legs")
        kinds[lv["vertex"]] = lv["type"]
    return build(kinds, [tuple(e) for e in data["edges"]])


def code_hex(g: StrandedGraph) -> str:
    return canonical_code(g).hex()


# ---------------------------------------------------------------- small graphs


def cycle_graph() -> StrandedGraph:
    return build(["r"], [(0, 0, 0, 1)])


def rooted_melon() -> StrandedGraph:
    return build(["r", "S", "S"], [(0, 0, 1, 3), (1, 0, 2, 1), (1, 2, 2, 3), (2, 0, 1, 1), (2, 2, 0, 1)])


def closed_ladder(kind: str) -> StrandedGraph:
    """The root followed by both sides of one ladder-vertex in series."""
    return build(["r", kind], [(0, 0, 1, 1), (1, 0, 1, 3), (1, 2, 0, 1)])


# ---------------------------------------------------------------- editing


class Editor:
    """Mutable workspace for local surgery; ``freeze`` compacts identifiers."""

    def __init__(self, g: StrandedGraph | None = None):
        self.kinds: list[str | None] = list(g.kinds) if g else []
        self.mate: list[int] = list(g.mate) if g else []

    def add(self, kind: str) -> int:
        self.kinds.append(kind)
        self.mate.extend((-1, -1, -1, -1))
        return len(self.kinds) - 1

    def add_chain(self, rungs: str) -> tuple[tuple[int, int], tuple[int, int]]:
        """Add an explicit ladder; returns its outer sides as (in, out) global slots."""
        edges, a, b = dipole_chain(rungs, len(self.kinds))
        for _ in range(2 * len(rungs)):
            self.add(STANDARD)
        for tv, ts, hv, hs in edges:
            self.connect(4 * tv + ts, 4 * hv + hs)
        return a, b

    def connect(self, t: int, h: int) -> None:
        self.mate[t] = h
        self.mate[h] = t

    def cut(self, t: int) -> tuple[int, int]:
        h = self.mate[t]
        self.mate[t] = self.mate[h] = -1
        return t, h

    def insert_side(self, tail: int, side_in: int, side_out: int) -> None:
        """Put a side (in-leg, out-leg) in the middle of the edge leaving ``tail``."""
        _, h = self.cut(tail)
        self.connect(tail, side_in)
        self.connect(side_out, h)

    def remove(self, v: int) -> None:
        for s in range(4 * v, 4 * v + 4):
            m = self.mate[s]
            if m >= 0:
                self.mate[m] = -1
            self.mate[s] = -1
        self.kinds[v] = None

    def smooth(self, v: int) -> None:
        """Delete a two-slot vertex, joining its in-edge to its out-edge."""
        t, h = self.mate[4 * v + 1], self.mate[4 * v]
        if t == 4 * v:
            raise StructureError("smoothing a vertex that closes on itself")
        self.mate[4 * v] = self.mate[4 * v + 1] = -1
        self.kinds[v] = None
        self.connect(t, h)

    def freeze(self, check: bool = True) -> StrandedGraph:
        keep = [v for v, k in enumerate(self.kinds) if k is not None]
        new = {v: i for i, v in enumerate(keep)}
        mate = [-1] * (4 * len(keep))
        for v in keep:
            for s in range(4):
                m = self.mate[4 * v + s]
                if m >= 0:
                    mate[4 * new[v] + s] = 4 * new[m >> 2] + (m & 3)
        g = StrandedGraph(tuple(self.kinds[v] for v in keep), tuple(mate))
        if check:
            validate(g)
        return g


def reroot(g: StrandedGraph, tail: int) -> StrandedGraph:
    """Move the root onto the edge leaving global slot ``tail``.

    ``tail`` refers to the slot numbering of ``g``; the edge must not be the
    root edge itself.
    """
    r = g.root
    if r is None or (tail >> 2) == r:
        raise StructureError("rerooting needs a rooted graph and a non-root edge")
    ed = Editor(g)
    ed.smooth(r)
    ed.kinds[r] = ROOT
    ed.insert_side(tail, 4 * r + 1, 4 * r)
    return ed.freeze()

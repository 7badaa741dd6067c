"""Genus-by-genus construction of vanishing-grade graphs and schemes.

Two levels are provided.

* Graph level (``generate_level``): explicit melon-free graphs of a given
  genus with at most ``max_vertices`` vertices, built from lower genera by
  connecting N-insertions (two-particle irreducible part) and by separating
  or two-edge gluings (reducible part).  This level is exact up to the
  vertex budget and is compared against the exhaustive oracle.

* Scheme level (``generate_schemes``): the same three moves applied to
  schemes, where ladders are ladder-vertices.  Ladder-vertices of a host are
  opened into short chains of pieces whenever an insertion site falls
  inside them, so the result does not depend on any vertex budget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .reduce import combine_types, find_melons, has_melon, insert_melon, to_scheme
from .stranded import (
    LADDER_KINDS,
    MINIMAL_RUNGS,
    ROOT,
    STANDARD,
    Editor,
    StrandedGraph,
    StructureError,
    canonical_code,
    cycle_graph,
    dipole_chain,
    genus_grade,
    is_2pi,
    is_connected,
    realize,
)

SEPARATING_TYPES = ("dN", "dL", "dR", "Ne", "No", "L", "R", "B")
CONNECTING_TYPES = ("dN", "Ne", "No")
DEFAULT_CAP = 3

# shortest rung word of each structure type
_MIN_WORD = {"dN": "N", "dL": "L", "dR": "R", "Ne": "NN", "No": "NNN", "L": "LL", "R": "RR", "B": "NL"}


class GenerationError(RuntimeError):
    pass


# ---------------------------------------------------------------- low-level surgery


def _add_word(ed: Editor, word: str) -> tuple[tuple[int, int], tuple[int, int], list[int]]:
    """Add an explicit ladder; returns sides A, B and the tails of rung edges."""
    edges, a, b = dipole_chain(word, len(ed.kinds))
    for _ in range(2 * len(word)):
        ed.add(STANDARD)
    for tv, ts, hv, hs in edges:
        ed.connect(4 * tv + ts, 4 * hv + hs)
    # the first two edges of each rung are its internal edges
    internal = []
    for r in range(len(word)):
        for tv, ts, _, _ in edges[2 * r: 2 * r + 2]:
            internal.append(4 * tv + ts)
    return a, b, internal


def _add_unit(ed: Editor, kind: str) -> tuple[tuple[int, int], tuple[int, int], list[int]]:
    if kind.startswith("d"):
        return _add_word(ed, kind[1:])
    x = ed.add(kind)
    return (4 * x + 1, 4 * x), (4 * x + 3, 4 * x + 2), []


def _rails(ed: Editor, left_b: tuple[int, int], right_a: tuple[int, int]) -> tuple[int, int]:
    ed.connect(left_b[1], right_a[0])
    ed.connect(right_a[1], left_b[0])
    return left_b[1], right_a[1]


def _copy(ed: Editor) -> Editor:
    out = Editor()
    out.kinds = list(ed.kinds)
    out.mate = list(ed.mate)
    return out


def _melon_on(ed: Editor, tail: int) -> list[int]:
    """Put a melon on an edge; returns the tails of its three inner edges."""
    u = ed.add(STANDARD)
    w = ed.add(STANDARD)
    ed.insert_side(tail, 4 * u + 3, 4 * w + 2)
    ed.connect(4 * u + 0, 4 * w + 1)
    ed.connect(4 * u + 2, 4 * w + 3)
    ed.connect(4 * w + 0, 4 * u + 1)
    return [4 * u, 4 * u + 2, 4 * w]


def _merge(ed: Editor, g: StrandedGraph) -> int:
    """Append a copy of ``g``; returns the vertex offset."""
    off = len(ed.kinds)
    ed.kinds.extend(g.kinds)
    ed.mate.extend(m + 4 * off if m >= 0 else -1 for m in g.mate)
    return off


def insert_structure(ed: Editor, word: str, tails: Sequence[int]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Insert an explicit ladder with side A on edge ``tails[0]`` and side B on ``tails[1]``.

    Equal tails put both sides in series on the same edge.
    """
    a, b, _ = _add_word(ed, word)
    t1, t2 = tails
    if t1 == t2:
        _, h = ed.cut(t1)
        ed.connect(t1, a[0])
        ed.connect(a[1], b[0])
        ed.connect(b[1], h)
    else:
        ed.insert_side(t1, *a)
        ed.insert_side(t2, *b)
    return a, b


def insert_connecting_N(graph: StrandedGraph, site: tuple[int, int], length: int) -> StrandedGraph:
    """Insert an N-ladder of ``length`` rungs between the edges ``site`` (tail slots).

    The result is checked to have the genus raised by one at unchanged grade.
    """
    if length < 1:
        raise ValueError("length must be positive")
    g0, l0 = genus_grade(graph)
    ed = Editor(graph)
    insert_structure(ed, "N" * length, site)
    out = ed.freeze()
    g1, l1 = genus_grade(out)
    if (g1, l1) != (g0 + 1, l0):
        raise StructureError("the site does not admit a connecting insertion")
    return out


def _glue(ed: Editor, g2: StrandedGraph) -> tuple[int, int]:
    """Append ``g2`` with its root removed; returns (tail into root, head out of root)."""
    off = _merge(ed, g2)
    r = off + g2.root
    t, h = ed.mate[4 * r + 1], ed.mate[4 * r]
    if t == 4 * r:
        raise StructureError("cannot glue the cycle graph")
    ed.mate[t] = ed.mate[h] = -1
    ed.mate[4 * r] = ed.mate[4 * r + 1] = -1
    ed.kinds[r] = None
    return t, h


def insert_separating(g1: StrandedGraph, g2: StrandedGraph, word: str, root_side: str = "G1",
                      site: int | None = None) -> StrandedGraph:
    """Join ``g1`` and ``g2`` through a ladder with rung word ``word``.

    Side A goes on the edge of the rooted part leaving ``site`` (the root
    edge by default); side B takes the place of the other part's root.
    """
    host, guest = (g1, g2) if root_side == "G1" else (g2, g1)
    if site is None:
        site = 4 * host.root
    ed = Editor(host)
    a, b, _ = _add_word(ed, word)
    ed.insert_side(site, *a)
    t, h = _glue(ed, guest)
    ed.connect(t, b[0])
    ed.connect(b[1], h)
    return ed.freeze()


def insert_two_edge_connection(g1: StrandedGraph, g2: StrandedGraph, site: int | None = None,
                               root_side: str = "G1") -> StrandedGraph:
    """Open the edge of the rooted part at ``site`` and splice in the other part through its root."""
    host, guest = (g1, g2) if root_side == "G1" else (g2, g1)
    if site is None:
        site = 4 * host.root
    ed = Editor(host)
    t1, h1 = ed.cut(site)
    t2, h2 = _glue(ed, guest)
    ed.connect(t1, h2)
    ed.connect(t2, h1)
    return ed.freeze()


# ---------------------------------------------------------------- graph level


@dataclass
class GenerationLevel:
    genus: int
    max_vertices: int | None
    graphs: dict[bytes, StrandedGraph] = field(default_factory=dict)
    two_pi: dict[bytes, StrandedGraph] = field(default_factory=dict)
    two_pr: dict[bytes, StrandedGraph] = field(default_factory=dict)
    schemes: dict[bytes, StrandedGraph] = field(default_factory=dict)
    schemes_2pi: dict[bytes, StrandedGraph] = field(default_factory=dict)

    def census(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for g in self.graphs.values():
            out[g.v] = out.get(g.v, 0) + 1
        return dict(sorted(out.items()))


def _elementary_melons(g: StrandedGraph):
    return find_melons(g)


def _melon_edges(m) -> set[int]:
    u, w = m.u, m.w
    return {4 * u + ((m.leg_in + 1) & 3), 4 * u + ((m.leg_in + 3) & 3), 4 * w + ((m.leg_out + 2) & 3)}


def _words(max_len: int) -> Iterator[str]:
    for k in range(1, max_len + 1):
        for t in itertools.product("NLR", repeat=k):
            yield "".join(t)


def _melonic_closure(base: Iterable[StrandedGraph], budget: int, max_melons: int) -> list[StrandedGraph]:
    """All graphs reachable by melon insertions with at most ``max_melons`` elementary melons."""
    seen = {}
    frontier = []
    for g in base:
        c = canonical_code(g)
        if c not in seen:
            seen[c] = g
            frontier.append(g)
    while frontier:
        nxt = []
        for g in frontier:
            if g.v + 2 > budget:
                continue
            for t, _ in g.edges():
                h = insert_melon(g, t)
                if len(find_melons(h)) > max_melons:
                    continue
                c = canonical_code(h)
                if c not in seen:
                    seen[c] = h
                    nxt.append(h)
        frontier = nxt
    return list(seen.values())


class _GraphLevels:
    def __init__(self, max_vertices: int):
        self.V = max_vertices
        self.core: dict[int, dict[bytes, StrandedGraph]] = {0: {canonical_code(cycle_graph()): cycle_graph()}}
        self.full: dict[int, list[StrandedGraph]] = {}

    def hosts(self, genus: int) -> list[StrandedGraph]:
        """Vanishing-grade graphs of the genus with at most two elementary melons."""
        if genus not in self.full:
            self.full[genus] = _melonic_closure(self.level(genus).values(), self.V, 2)
        return self.full[genus]

    def level(self, genus: int) -> dict[bytes, StrandedGraph]:
        if genus not in self.core:
            self.core[genus] = self._build(genus)
        return self.core[genus]

    def _accept(self, out: dict, g: StrandedGraph, genus: int) -> None:
        if g.v > self.V or has_melon(g):
            return
        c = canonical_code(g)
        if c in out:
            return
        if genus_grade(g) == (genus, 0):
            out[c] = g

    def _build(self, genus: int) -> dict[bytes, StrandedGraph]:
        V = self.V
        out: dict[bytes, StrandedGraph] = {}
        # irreducible part: connecting N-insertions into genus - 1
        for host in self.hosts(genus - 1):
            room = (V - host.v) // 2
            if room < 1:
                continue
            melons = find_melons(host)
            need = [_melon_edges(m) for m in melons]
            tails = [t for t, _ in host.edges()]
            for i, t1 in enumerate(tails):
                for t2 in tails[i:]:
                    if any(t1 not in s and t2 not in s for s in need):
                        continue
                    for k in range(1, room + 1):
                        ed = Editor(host)
                        insert_structure(ed, "N" * k, (t1, t2))
                        self._accept(out, ed.freeze(), genus)
        # reducible part: rooted part of genus g1 >= 0, other part of genus g2 >= 1
        changed = True
        while changed:
            size = len(out)
            for g1 in range(genus):
                g2 = genus - g1
                parts2 = list(self.level(g2).values()) if g2 < genus else list(out.values())
                for host in self.hosts(g1):
                    melons = find_melons(host)
                    if len(melons) > 1:
                        continue
                    need = _melon_edges(melons[0]) if melons else None
                    for t, _ in host.edges():
                        if need is not None and t not in need:
                            continue
                        for guest in parts2:
                            room = V - host.v - guest.v
                            if room < 0:
                                continue
                            if g1 > 0 or host.v > 0:
                                self._accept(out, insert_two_edge_connection(host, guest, t), genus)
                            for word in _words(room // 2):
                                self._accept(out, insert_separating(host, guest, word, site=t), genus)
            changed = len(out) != size
        return out


@lru_cache(maxsize=None)
def _graph_levels(max_vertices: int) -> _GraphLevels:
    return _GraphLevels(max_vertices)


def generate_level(g: int, max_vertices: int = 6, schemes: bool = False, cap: int = DEFAULT_CAP) -> GenerationLevel:
    """Melon-free vanishing-grade graphs of genus ``g`` with at most ``max_vertices`` vertices.

    With ``schemes`` the symbolic scheme set of the genus is attached as well.
    """
    if g < 0:
        raise ValueError("genus must be non-negative")
    graphs = _graph_levels(max_vertices).level(g)
    level = GenerationLevel(g, max_vertices)
    for c in sorted(graphs):
        gr = graphs[c]
        level.graphs[c] = gr
        (level.two_pi if is_2pi(gr) else level.two_pr)[c] = gr
    if schemes:
        ss = generate_schemes(g, cap)
        level.schemes = dict(ss.schemes)
        level.schemes_2pi = dict(ss.schemes_2pi)
    return level


# ---------------------------------------------------------------- scheme level


def lv_patterns(kind: str, k: int, pieces: Sequence[str]) -> list[tuple]:
    """Ways of opening a ladder-vertex of type ``kind`` around ``k`` insertion sites.

    A pattern is a sequence of tokens: ``("u", t)`` an intact piece (a dipole
    ``dN/dL/dR`` or a ladder-vertex type), ``("d", letter, sites)`` a dipole
    with sites on its rung edges (indices 0, 1), and ``("g", sites)`` sites on
    the two rails (0 upper, 1 lower) between the neighbouring pieces.
    """
    if k == 1:
        group_sets = [[("g", (0,))], [("g", (1,))]] + [[("d", x, (e,))] for x in "NLR" for e in (0, 1)]
    elif k == 2:
        single = [[("g", s)] for s in ((0, 0), (0, 1), (1, 1))]
        single += [[("d", x, s)] for x in "NLR" for s in ((0, 0), (0, 1), (1, 1))]
        ones = [("g", (0,)), ("g", (1,))] + [("d", x, (e,)) for x in "NLR" for e in (0, 1)]
        group_sets = single + [[a, b] for a in ones for b in ones]
    else:
        raise ValueError("one or two sites per ladder-vertex")
    out = []
    seg_choices = [None] + list(pieces)
    for groups in group_sets:
        for segs in itertools.product(seg_choices, repeat=len(groups) + 1):
            tokens = []
            ok = True
            for i, grp in enumerate(groups):
                if segs[i] is not None:
                    tokens.append(("u", segs[i]))
                tokens.append(grp)
            if segs[-1] is not None:
                tokens.append(("u", segs[-1]))
            for i, tok in enumerate(tokens):
                if tok[0] == "g":
                    if i == 0 or i == len(tokens) - 1 or tokens[i - 1][0] == "g" or tokens[i + 1][0] == "g":
                        ok = False
            if not ok:
                continue
            kinds = [t[1] if t[0] == "u" else "d" + t[1] for t in tokens if t[0] != "g"]
            rungs = sum(len(MINIMAL_RUNGS[x]) if x in LADDER_KINDS else 1 for x in kinds)
            if rungs < 2 or combine_types(kinds) != kind:
                continue
            out.append(tuple(tokens))
    return out


def _open(ed: Editor, v: int, pattern: tuple, slotmap: dict | None = None) -> list[int]:
    """Replace ladder-vertex ``v`` by the chain ``pattern``; returns the site tails.

    ``slotmap`` receives where the old slots of ``v`` now live.
    """
    partner = [ed.mate[4 * v + s] for s in range(4)]
    for s in range(4):
        ed.mate[4 * v + s] = -1
    kind_v = ed.kinds[v]
    ed.kinds[v] = None
    sites: list[int] = []
    first_a = last_b = None
    pending_gap = None
    for tok in pattern:
        if tok[0] == "g":
            pending_gap = tok[1]
            continue
        if tok[0] == "u":
            a, b, _ = _add_unit(ed, tok[1])
            internal = []
        else:
            a, b, internal = _add_word(ed, tok[1])
        if last_b is None:
            first_a = a
        else:
            upper, lower = _rails(ed, last_b, a)
            if pending_gap is not None:
                sites.extend(upper if r == 0 else lower for r in pending_gap)
        pending_gap = None
        if tok[0] == "d":
            sites.extend(internal[e] for e in tok[2])
        last_b = b
    new = {4 * v + 1: first_a[0], 4 * v: first_a[1], 4 * v + 3: last_b[0], 4 * v + 2: last_b[1]}
    if slotmap is not None:
        slotmap.update(new)
    for s in (0, 2):
        p = partner[s]
        ed.connect(new[4 * v + s], new.get(p, p))
    for s in (1, 3):
        p = partner[s]
        if p not in new:
            ed.connect(p, new[4 * v + s])
    return sites


def _site_configs(host: StrandedGraph, k: int, pieces: Sequence[str]) -> Iterator[tuple[Editor, list[int]]]:
    """Editors with ``k`` insertion sites placed on edges or inside ladder-vertices of ``host``."""
    edges = [t for t, _ in host.edges()]
    lvs = host.ladder_vertices()
    pats = {}

    def patterns(v, n):
        key = (host.kinds[v], n)
        if key not in pats:
            pats[key] = lv_patterns(host.kinds[v], n, pieces)
        return pats[key]

    if k == 1:
        for t in edges:
            yield Editor(host), [t]
        for v in lvs:
            for p in patterns(v, 1):
                ed = Editor(host)
                yield ed, _open(ed, v, p)
        return
    for i, t1 in enumerate(edges):
        for t2 in edges[i:]:
            yield Editor(host), [t1, t2]
    for v in lvs:
        for p in patterns(v, 1):
            for t in edges:
                ed = Editor(host)
                moved: dict[int, int] = {}
                s = _open(ed, v, p, moved)
                yield ed, [moved.get(t, t)] + s
    for i, v in enumerate(lvs):
        for w in lvs[i + 1:]:
            for p in patterns(v, 1):
                for q in patterns(w, 1):
                    ed = Editor(host)
                    s = _open(ed, v, p)
                    yield ed, s + _open(ed, w, q)
        for p in patterns(v, 2):
            ed = Editor(host)
            yield ed, _open(ed, v, p)


@dataclass
class SchemeSet:
    genus: int
    cap: int
    schemes: dict[bytes, StrandedGraph] = field(default_factory=dict)
    schemes_2pi: dict[bytes, StrandedGraph] = field(default_factory=dict)
    candidates: int = 0

    def __len__(self) -> int:
        return len(self.schemes)


class _Collector:
    def __init__(self, genus: int, verify_all: bool):
        self.genus = genus
        self.verify_all = verify_all
        self.good: dict[bytes, StrandedGraph] = {}
        self.bad: set[bytes] = set()
        self.candidates = 0

    def offer(self, g: StrandedGraph, trusted: bool = False) -> None:
        self.candidates += 1
        try:
            s = to_scheme(g, check=False)
        except StructureError:
            return
        c = canonical_code(s)
        if c in self.good or c in self.bad:
            return
        if has_melon(s) or genus_grade(s) != (self.genus, 0):
            if trusted:
                raise GenerationError("a separating gluing produced an invalid scheme")
            self.bad.add(c)
            return
        self.good[c] = s


def _n_family_only(kinds) -> bool:
    return all(k in ("Ne", "No") for k in kinds if k in LADDER_KINDS)


@lru_cache(maxsize=None)
def generate_schemes(g: int, cap: int = DEFAULT_CAP) -> SchemeSet:
    """All vanishing-grade schemes of genus ``g``.

    ``cap`` bounds the number of explicit rungs of the connecting N-ladders
    inserted in the irreducible step; separating structures are inserted in
    their shortest realization of each type up to the same cap.
    """
    if g < 0:
        raise ValueError("genus must be non-negative")
    if cap < 3:
        raise ValueError("a cap below 3 cannot realize every ladder type")
    out = SchemeSet(g, cap)
    if g == 0:
        c = cycle_graph()
        out.schemes[canonical_code(c)] = c
        out.schemes_2pi[canonical_code(c)] = c
        return out
    col = _Collector(g, verify_all=True)
    lower = {h: generate_schemes(h, cap) for h in range(g)}
    # irreducible step: a connecting N-structure between two sites of a genus g-1 scheme
    n_words = ["N" * k for k in range(1, cap + 1)]
    n_pieces = ("dN", "Ne", "No")
    for host in lower[g - 1].schemes.values():
        for base, sites in _site_configs(host, 2, n_pieces):
            if not _n_family_only(base.kinds):
                continue
            for word in n_words:
                ed = _copy(base)
                insert_structure(ed, word, sites)
                col.offer(ed.freeze())
        # both sides inside one melon sitting at a single site
        for base, sites in _site_configs(host, 1, n_pieces):
            if not _n_family_only(base.kinds):
                continue
            for i in range(3):
                for j in range(i, 3):
                    for word in n_words:
                        ed = _copy(base)
                        inner = _melon_on(ed, sites[0])
                        insert_structure(ed, word, (inner[i], inner[j]))
                        col.offer(ed.freeze())
    two_pi = {c: s for c, s in col.good.items() if is_2pi(realize(s))}
    # reducible step: rooted part of genus g1 >= 0 (the cycle when g1 = 0), other part of genus g - g1
    sep_words = sorted({w for t, w in _MIN_WORD.items() if len(w) <= cap})
    all_pieces = SEPARATING_TYPES
    for g1 in range(g):
        g2 = g - g1
        guests = list(two_pi.values()) if g1 == 0 else list(lower[g2].schemes.values())
        for host in lower[g1].schemes.values():
            for base, sites in _site_configs(host, 1, all_pieces):
                for guest in guests:
                    for word in sep_words:
                        ed = _copy(base)
                        a, b, _ = _add_word(ed, word)
                        ed.insert_side(sites[0], *a)
                        t, h = _glue(ed, guest)
                        ed.connect(t, b[0])
                        ed.connect(b[1], h)
                        col.offer(ed.freeze(), trusted=True)
                    if g1 > 0:
                        ed = _copy(base)
                        t1, h1 = ed.cut(sites[0])
                        t2, h2 = _glue(ed, guest)
                        ed.connect(t1, h2)
                        ed.connect(t2, h1)
                        col.offer(ed.freeze(), trusted=True)
    for c in sorted(col.good):
        s = col.good[c]
        if not is_connected(s):
            raise GenerationError("generated scheme is disconnected")
        out.schemes[c] = s
        if c in two_pi:
            out.schemes_2pi[c] = s
    out.candidates = col.candidates
    return out


def closure_gain(g: int, cap: int = DEFAULT_CAP) -> int:
    """New schemes produced by one more reducible pass that also reuses the level's own 2PR schemes.

    Zero means the scheme set is a fixed point of the insertion and reduction moves.
    """
    ss = generate_schemes(g, cap)
    col = _Collector(g, verify_all=True)
    col.good.update(ss.schemes)
    cyc = cycle_graph()
    for guest in ss.schemes.values():
        if guest.kinds.count(ROOT) != 1 or canonical_code(guest) in ss.schemes_2pi:
            continue
        for word in sorted(set(_MIN_WORD.values())):
            col.offer(insert_separating(cyc, guest, word), trusted=True)
    return len(col.good) - len(ss.schemes)

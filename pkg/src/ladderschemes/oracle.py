"""Exhaustive enumeration of rooted connected graphs, one per isomorphism class.

The search builds graphs directly in their canonical breadth-first labelling:
slots are filled in the order the canonical traversal visits them, and every
free slot is matched either to an open slot of opposite orientation on an
already discovered vertex or to a fresh vertex entered at relative slot 0 or
1.  Distinct choice sequences therefore give distinct canonical codes, and
every class is reached, so no deduplication table is needed.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .stranded import STANDARD, StrandedGraph, _cycles, _PERM_I, _PERM_L, _PERM_R, invariants_from_counts

DEFAULT_BOUND = int(os.environ.get("LADDERSCHEMES_ORACLE_BOUND", "6"))


class BoundExceeded(ValueError):
    pass


@dataclass
class Census:
    counts: Counter = field(default_factory=Counter)
    melon_free: Counter = field(default_factory=Counter)

    def rows(self) -> list[tuple[int, int, int, bool, int]]:
        rows = [(v, g, ell, False, c) for (v, g, ell), c in self.counts.items()]
        rows += [(v, g, ell, True, c) for (v, g, ell), c in self.melon_free.items()]
        return sorted(rows)

    def total(self, v: int) -> int:
        return sum(c for (vv, _, _), c in self.counts.items() if vv == v)


def _check_bound(v_max: int, bound: int | None) -> None:
    bound = DEFAULT_BOUND if bound is None else bound
    if v_max < 0:
        raise ValueError("v_max must be non-negative")
    if v_max > bound:
        raise BoundExceeded(f"v_max={v_max} exceeds the oracle bound {bound}; raise it explicitly")


class _Search:
    def __init__(self, v_max: int):
        self.v_max = v_max
        self.kinds = ["r"]
        self.mate = [-1, -1, -1, -1]
        self.off = [0]

    def _next_free(self, i: int, j: int) -> tuple[int, int]:
        kinds, mate, off = self.kinds, self.mate, self.off
        while i < len(kinds):
            deg = 2 if i == 0 else 4
            while j < deg:
                s = (i << 2) | ((off[i] + j) & 3)
                if mate[s] < 0:
                    return i, j
                j += 1
            i += 1
            j = 0
        return i, j

    def choices(self, i: int, j: int) -> list:
        """Moves available at cursor (i, j): ('pair', slot) or ('new', rel)."""
        s = (i << 2) | ((self.off[i] + j) & 3)
        want = 1 - (s & 1)
        out = []
        mate = self.mate
        for w in range(len(self.kinds)):
            deg = 2 if w == 0 else 4
            for t in range(deg):
                slot = (w << 2) | t
                if mate[slot] < 0 and slot != s and (t & 1) == want:
                    out.append(("pair", slot))
        if len(self.kinds) - 1 < self.v_max:
            out.append(("new", want))
        return out

    def apply(self, s: int, move) -> int | None:
        kind, arg = move
        if kind == "pair":
            self.mate[s] = arg
            self.mate[arg] = s
            return None
        w = len(self.kinds)
        self.kinds.append(STANDARD)
        self.mate.extend((-1, -1, -1, -1))
        self.off.append(0)
        t = (w << 2) | arg
        self.mate[s] = t
        self.mate[t] = s
        return w

    def undo(self, s: int, move, w: int | None) -> None:
        m = self.mate[s]
        self.mate[s] = -1
        self.mate[m] = -1
        if w is not None:
            self.kinds.pop()
            del self.mate[-4:]
            self.off.pop()

    def run(self, i: int, j: int, sink) -> None:
        i, j = self._next_free(i, j)
        if i >= len(self.kinds):
            sink(self.kinds, self.mate)
            return
        s = (i << 2) | ((self.off[i] + j) & 3)
        for move in self.choices(i, j):
            w = self.apply(s, move)
            self.run(i, j + 1, sink)
            self.undo(s, move, w)

    def prefix_moves(self) -> list:
        i, j = self._next_free(0, 0)
        return self.choices(i, j)


def _leaf_invariants(kinds, mate) -> tuple[int, int, int]:
    v = len(kinds) - 1
    fl = len(_cycles(kinds, mate, _PERM_L)[0])
    fr = len(_cycles(kinds, mate, _PERM_R)[0])
    phi = len(_cycles(kinds, mate, _PERM_I)[0])
    g, ell = invariants_from_counts(v, fl + fr, phi)
    return v, g, ell


def enumerate_rooted(v_max: int, bound: int | None = None) -> Iterator[StrandedGraph]:
    """Yield one representative per class of rooted connected graphs with at most ``v_max`` vertices."""
    _check_bound(v_max, bound)
    found: list[StrandedGraph] = []

    def sink(kinds, mate):
        found.append(StrandedGraph(tuple(kinds), tuple(mate)))

    search = _Search(v_max)
    # drain per top-level branch so memory stays bounded by one branch
    i, j = search._next_free(0, 0)
    s = (i << 2) | ((search.off[i] + j) & 3)
    for move in search.choices(i, j):
        w = search.apply(s, move)
        search.run(i, j + 1, sink)
        search.undo(s, move, w)
        yield from found
        found.clear()


def _census_branch(args) -> tuple[Counter, Counter]:
    v_max, branch, melon_free = args
    from .reduce import has_melon

    counts: Counter = Counter()
    free: Counter = Counter()

    def sink(kinds, mate):
        key = _leaf_invariants(kinds, mate)
        counts[key] += 1
        if melon_free and not has_melon(StrandedGraph(tuple(kinds), tuple(mate))):
            free[key] += 1

    search = _Search(v_max)
    i, j = search._next_free(0, 0)
    s = (i << 2) | ((search.off[i] + j) & 3)
    move = search.choices(i, j)[branch]
    w = search.apply(s, move)
    search.run(i, j + 1, sink)
    search.undo(s, move, w)
    return counts, free


def census(v_max: int, melon_free: bool = False, workers: int = 1, bound: int | None = None) -> Census:
    """Counts of rooted connected graphs by (v, g, ell); optionally also the melon-free ones."""
    _check_bound(v_max, bound)
    n_branches = len(_Search(v_max).prefix_moves())
    jobs = [(v_max, b, melon_free) for b in range(n_branches)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_census_branch, jobs))
    else:
        parts = [_census_branch(job) for job in jobs]
    out = Census()
    for counts, free in parts:
        out.counts.update(counts)
        out.melon_free.update(free)
    return out


def melon_free_graphs(v_max: int, genus: int, bound: int | None = None) -> dict[bytes, StrandedGraph]:
    """Melon-free graphs of vanishing grade and the given genus, keyed by canonical code."""
    from .reduce import has_melon
    from .stranded import canonical_code

    out = {}
    for g in enumerate_rooted(v_max, bound):
        v, gg, ell = _leaf_invariants(g.kinds, g.mate)
        if ell == 0 and gg == genus and not has_melon(g):
            out[canonical_code(g)] = g
    return out

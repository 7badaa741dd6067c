"""Dominant schemes, their plane binary trees, and the triple-scaled series D(kappa)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .series import PowerSeries, domb_sykes
from .stranded import ROOT, STANDARD, Editor, StrandedGraph, StructureError, genus_grade

LEAF_KINDS = ("even", "odd")
INNER_KINDS = ("planar", "contactN", "contactR", "contactL")

# which inner edge of the contact melon stays intact (template slots of u, w)
_INTACT = {"contactN": 2, "contactR": 0, "contactL": 1}
# the three inner edges of a melon entered at u3 and left at w2
_MELON_EDGES = (((0, 0), (1, 1)), ((0, 2), (1, 3)), ((1, 0), (0, 1)))


@dataclass(frozen=True)
class Leaf:
    parity: str

    def __post_init__(self):
        if self.parity not in LEAF_KINDS:
            raise ValueError(f"unknown leaf decoration {self.parity!r}")


@dataclass(frozen=True)
class Node:
    kind: str
    left: "Tree"
    right: "Tree"

    def __post_init__(self):
        if self.kind not in INNER_KINDS:
            raise ValueError(f"unknown inner decoration {self.kind!r}")


Tree = Union[Leaf, Node]


@dataclass(frozen=True)
class DecoratedTree:
    """A plane binary tree hanging from a root edge, with decorated leaves and inner vertices."""

    top: Tree

    @property
    def leaves(self) -> int:
        return _count(self.top)[0]

    @property
    def inner(self) -> int:
        return _count(self.top)[1]

    @property
    def edges(self) -> int:
        return self.leaves + self.inner

    def counts(self) -> dict[str, int]:
        out = {k: 0 for k in LEAF_KINDS + INNER_KINDS}
        stack = [self.top]
        while stack:
            t = stack.pop()
            if isinstance(t, Leaf):
                out[t.parity] += 1
            else:
                out[t.kind] += 1
                stack += [t.left, t.right]
        return out

    def __str__(self) -> str:
        return _fmt(self.top)


def _count(t: Tree) -> tuple[int, int]:
    if isinstance(t, Leaf):
        return 1, 0
    a, b = _count(t.left)
    c, d = _count(t.right)
    return a + c, b + d + 1


def _fmt(t: Tree) -> str:
    if isinstance(t, Leaf):
        return t.parity[0]
    return f"{t.kind}({_fmt(t.left)},{_fmt(t.right)})"


def _shapes(n: int) -> Iterator[Tree]:
    """Plane binary trees with ``n`` leaves, leaves undecorated (parity placeholder)."""
    if n == 1:
        yield None
        return
    for k in range(1, n):
        for a in _shapes(k):
            for b in _shapes(n - k):
                yield ("node", a, b)


def _decorate(shape) -> Iterator[Tree]:
    if shape is None:
        for p in LEAF_KINDS:
            yield Leaf(p)
        return
    _, a, b = shape
    for kind in INNER_KINDS:
        for left in _decorate(a):
            for right in _decorate(b):
                yield Node(kind, left, right)


def all_trees(g: int) -> Iterator[DecoratedTree]:
    """Every decorated tree with ``g`` leaves."""
    if g < 1:
        return
    for shape in _shapes(g):
        for t in _decorate(shape):
            yield DecoratedTree(t)


def catalan(m: int) -> int:
    return math.comb(2 * m, m) // (m + 1)


def count_dominant(g: int) -> int:
    if g < 1:
        raise ValueError("dominant schemes exist for g >= 1")
    return catalan(g - 1) * 2 ** g * 4 ** (g - 1)


def is_dominant(scheme: StrandedGraph) -> bool:
    """Vanishing grade with the maximal number 2g - 1 of B-vertices."""
    g, ell = genus_grade(scheme)
    return ell == 0 and g >= 1 and scheme.kinds.count("B") == 2 * g - 1


# ---------------------------------------------------------------- tree -> scheme


def tree_to_scheme(tree: DecoratedTree) -> StrandedGraph:
    ed = Editor()
    r = ed.add(ROOT)
    b = ed.add("B")
    ed.connect(4 * r, 4 * b + 1)
    ed.connect(4 * b, 4 * r + 1)
    _attach(ed, tree.top, (4 * b + 3, 4 * b + 2))
    return ed.freeze()


def _attach(ed: Editor, t: Tree, side: tuple[int, int]) -> None:
    s_in, s_out = side
    if isinstance(t, Leaf) and t.parity == "even":
        x = ed.add("Ne")
        ed.connect(s_out, 4 * x + 1)
        ed.connect(4 * x, 4 * x + 3)
        ed.connect(4 * x + 2, s_in)
        return
    if isinstance(t, Node) and t.kind == "planar":
        b1, b2 = ed.add("B"), ed.add("B")
        ed.connect(s_out, 4 * b1 + 1)
        ed.connect(4 * b1, 4 * b2 + 1)
        ed.connect(4 * b2, s_in)
        _attach(ed, t.left, (4 * b1 + 3, 4 * b1 + 2))
        _attach(ed, t.right, (4 * b2 + 3, 4 * b2 + 2))
        return
    # a melon entered at u3 and left at w2; two inner edges carry a structure each
    u, w = ed.add(STANDARD), ed.add(STANDARD)
    vs = (u, w)
    ed.connect(s_out, 4 * u + 3)
    ed.connect(4 * w + 2, s_in)
    if isinstance(t, Leaf):
        x = ed.add("No")
        hosts = [(_MELON_EDGES[0], (4 * x + 1, 4 * x)), (_MELON_EDGES[1], (4 * x + 3, 4 * x + 2))]
        intact = [_MELON_EDGES[2]]
        children = []
    else:
        cut = [e for i, e in enumerate(_MELON_EDGES) if i != _INTACT[t.kind]]
        intact = [_MELON_EDGES[_INTACT[t.kind]]]
        b1, b2 = ed.add("B"), ed.add("B")
        hosts = [(cut[0], (4 * b1 + 1, 4 * b1)), (cut[1], (4 * b2 + 1, 4 * b2))]
        children = [(t.left, (4 * b1 + 3, 4 * b1 + 2)), (t.right, (4 * b2 + 3, 4 * b2 + 2))]
    for (a, sa), (c, sc) in intact:
        ed.connect(4 * vs[a] + sa, 4 * vs[c] + sc)
    for ((a, sa), (c, sc)), (x_in, x_out) in hosts:
        ed.connect(4 * vs[a] + sa, x_in)
        ed.connect(x_out, 4 * vs[c] + sc)
    for child, side2 in children:
        _attach(ed, child, side2)


# ---------------------------------------------------------------- scheme -> tree


def scheme_to_tree(scheme: StrandedGraph) -> DecoratedTree:
    """Read the decorated tree off a dominant scheme; raises on other schemes."""
    if not is_dominant(scheme):
        raise StructureError("not a dominant scheme")
    mate, kinds = scheme.mate, scheme.kinds
    r = scheme.root
    h = mate[4 * r]
    b = h >> 2
    if kinds[b] != "B" or mate[4 * b + ((h & 3) ^ 1)] != 4 * r + 1:
        raise StructureError("the root must sit on one side of a B-vertex")
    seen: set[int] = {r, b}
    top = _read(scheme, _other_side(b, h & 3), seen)
    if len(seen) != scheme.n:
        raise StructureError("unread vertices left")
    return DecoratedTree(top)


def _other_side(x: int, in_slot: int) -> tuple[int, int]:
    base = (in_slot & 2) ^ 2
    return 4 * x + base + 1, 4 * x + base


def _read(s: StrandedGraph, side: tuple[int, int], seen: set[int]) -> Tree:
    mate, kinds = s.mate, s.kinds
    s_in, s_out = side
    h = mate[s_out]
    t = mate[s_in]
    x = h >> 2
    if x in seen:
        raise StructureError("tree structure revisits a vertex")
    k = kinds[x]
    if k == "Ne":
        side_h = h & 2
        if (t >> 2) != x or mate[4 * x + side_h] != 4 * x + (side_h ^ 2) + 1:
            raise StructureError("malformed even leaf")
        seen.add(x)
        return Leaf("even")
    if k == "B":
        b1 = x
        b2h = mate[4 * b1 + (h & 2)]
        b2 = b2h >> 2
        if kinds[b2] != "B" or b2 == b1 or mate[4 * b2 + (b2h & 2)] != s_in:
            raise StructureError("malformed planar vertex")
        seen.update((b1, b2))
        left = _read(s, _other_side(b1, h & 3), seen)
        right = _read(s, _other_side(b2, b2h & 3), seen)
        return Node("planar", left, right)
    if k != STANDARD:
        raise StructureError("unexpected vertex in a dominant scheme")
    u, w = x, t >> 2
    ou, ow = ((h & 3) - 3) & 3, ((t & 3) - 2) & 3
    if (h & 3) & 1 == 0 or kinds[w] != STANDARD or w == u or ow & 1 or ou & 1:
        raise StructureError("malformed melon part")
    vs, off = (u, w), (ou, ow)

    def slot(a, sa):
        return 4 * vs[a] + ((sa + off[a]) & 3)

    seen.update((u, w))
    intact, hung = [], []
    for i, ((a, sa), (c, sc)) in enumerate(_MELON_EDGES):
        tail, head = slot(a, sa), slot(c, sc)
        if mate[tail] == head:
            intact.append(i)
            continue
        y_in = mate[tail]
        y = y_in >> 2
        if mate[4 * y + (y_in & 2)] != head:
            raise StructureError("a broken melon edge must run through one side of a ladder-vertex")
        hung.append((i, y, y_in))
    if len(intact) != 1:
        raise StructureError("expected exactly one intact melon edge")
    ys = {kinds[y] for _, y, _ in hung}
    if ys == {"No"}:
        if intact != [2] or hung[0][1] != hung[1][1]:
            raise StructureError("malformed odd leaf")
        if [kinds[hung[0][1]]] != ["No"] or (hung[0][2] & 2) == (hung[1][2] & 2):
            raise StructureError("malformed odd leaf")
        seen.add(hung[0][1])
        return Leaf("odd")
    if ys != {"B"} or hung[0][1] == hung[1][1]:
        raise StructureError("malformed contact vertex")
    kind = {v: k for k, v in _INTACT.items()}[intact[0]]
    (_, b1, in1), (_, b2, in2) = hung
    seen.update((b1, b2))
    left = _read(s, _other_side(b1, in1 & 3), seen)
    right = _read(s, _other_side(b2, in2 & 3), seen)
    return Node(kind, left, right)


# ---------------------------------------------------------------- triple-scaled series

KAPPA_C = 2 * math.sqrt(3 / 5)
PREFACTOR = (2 / 3) * math.sqrt(8 / 3)


@dataclass(frozen=True)
class TripleScaledSeries:
    """``prefactor * sum_g coeffs[g] * kappa**(2g)`` with exact rational ``coeffs``."""

    prefactor: float
    coeffs: PowerSeries
    kappa_c: float

    def coefficient(self, g: int) -> float:
        return self.prefactor * float(self.coeffs[g])

    def evaluate(self, kappa: float) -> float:
        return self.prefactor * self.coeffs.evaluate(kappa * kappa)

    def radius(self, start: int | None = None) -> float:
        """Radius in kappa from the ratio test on the coefficients in kappa**2."""
        c = [float(x) for x in self.coeffs.coeffs[1:]]
        rho, _ = domb_sykes(c, start)
        return math.sqrt(rho)


def D_series(order: int) -> TripleScaledSeries:
    """Dominant schemes resummed over all genera, as a series in kappa**2."""
    if order < 1:
        raise ValueError("order must be at least 1")
    c = [Fraction(0)] + [catalan(g - 1) * Fraction(5, 48) ** g for g in range(1, order + 1)]
    return TripleScaledSeries(PREFACTOR, PowerSeries(tuple(c)), KAPPA_C)


def D_closed(kappa: float) -> float:
    if abs(kappa) >= KAPPA_C:
        raise ValueError("the closed form is real only for |kappa| < kappa_c")
    return (2 / 3) ** 1.5 * (1 - math.sqrt(1 - 5 * kappa * kappa / 12))


def D_closed_taylor(order: int) -> list[Fraction]:
    """Taylor coefficients in kappa**2 of (1 - sqrt(1 - 5 kappa**2 / 12)), computed from the binomial series."""
    y = Fraction(5, 12)
    out = [Fraction(0)]
    for n in range(1, order + 1):
        # -(binom(1/2, n)) (-y)^n
        b = Fraction(1)
        for j in range(n):
            b *= Fraction(1, 2) - j
            b /= j + 1
        out.append(-b * (-y) ** n)
    return out


def mean_genus(kappa: float) -> float:
    """Half the log-derivative kappa d/dkappa ln D."""
    if not 0 < kappa < KAPPA_C:
        raise ValueError("mean genus is defined for 0 < kappa < kappa_c")
    x = 5 * kappa * kappa / 12
    s = math.sqrt(1 - x)
    return (x / 2) / (s * (1 - s))


def mean_genus_asymptotic(kappa: float) -> float:
    return 1 / (2 * math.sqrt(1 - (kappa / KAPPA_C) ** 2))

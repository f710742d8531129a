"""Elementary melons of the quartic model, contraction and core reduction.

Type I melons are two tetrahedra sharing three propagators whose closure has
degree zero; type II melons are a pillow carrying a tadpole on one of its
double-edge pairs. Contracting a melon removes its nodes and joins the two
propagators left dangling, which preserves the degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import OpenGraph, StaleMelon, UnsupportedBubble
from .graphs import (
    BUBBLE_COLORS,
    EdgeColoredGraph,
    bubble_kind,
    canonical_form,
    degree,
)
from . import library

LO = "LO"
NLO = "NLO"


@dataclass(frozen=True)
class Melon:
    kind: str  # "I" or "II"
    bubbles: tuple[tuple[int, ...], ...]
    internal_lines: tuple[tuple[int, int], ...]
    boundary: tuple[int, int]

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(x for b in self.bubbles for x in b))


def _kinds(g: EdgeColoredGraph):
    return [(nodes, bubble_kind(g, nodes)) for nodes in g.bubbles()]


def _closure_is_planar(g: EdgeColoredGraph, nodes, a: int, b: int) -> bool:
    sub = g.subgraph(nodes)
    index = {x: i for i, x in enumerate(nodes)}
    row = list(sub.partners[0])
    row[index[a]], row[index[b]] = index[b], index[a]
    closed = EdgeColoredGraph((tuple(row),) + sub.partners[1:])
    return degree(closed).omega2 == 0


def find_melons(g: EdgeColoredGraph) -> list[Melon]:
    """All elementary melons, ordered by smallest node.

    A melon's two boundary half-lines must be distinct propagators or external
    legs: in the base graphs they close onto each other and there is nothing
    left to contract.
    """
    if g.bare:
        return []
    p0 = g.partners[0]
    kinds = _kinds(g)
    owner = {}
    for idx, (nodes, _) in enumerate(kinds):
        for x in nodes:
            owner[x] = idx
    found = []

    tetras = [i for i, (_, k) in enumerate(kinds) if k == "tetra"]
    tetra_set = set(tetras)
    for i in tetras:
        A = kinds[i][0]
        partners_of = {}
        for x in A:
            y = p0[x]
            if y != -1 and owner[y] in tetra_set and owner[y] > i:
                partners_of.setdefault(owner[y], []).append(x)
        for j, xs in partners_of.items():
            if len(xs) != 3:
                continue
            B = kinds[j][0]
            (a,) = set(A) - set(xs)
            (b,) = (y for y in B if p0[y] not in A)
            nodes = A + B
            if _closure_is_planar(g, nodes, a, b):
                lines = tuple(sorted((min(x, p0[x]), max(x, p0[x])) for x in xs))
                found.append(Melon("I", (A, B), lines, (a, b)))

    for nodes, k in kinds:
        if not k.startswith("pillow"):
            continue
        color = int(k[-1])
        doubled = next(c for c in BUBBLE_COLORS if c != color)
        x = nodes[0]
        pair1 = (x, g.partners[doubled][x])
        pair2 = tuple(y for y in nodes if y not in pair1)
        for tad, free in ((pair1, pair2), (pair2, pair1)):
            if p0[tad[0]] == tad[1] and p0[free[0]] != free[1]:
                found.append(
                    Melon("II", (nodes,), (tuple(sorted(tad)),), tuple(sorted(free)))
                )
    found.sort(key=lambda m: (m.nodes[0], m.kind))
    return found


def contract_melon(g: EdgeColoredGraph, m: Melon) -> EdgeColoredGraph:
    """Excise ``m`` and join its two boundary propagators into one line."""
    if m not in find_melons(g):
        raise StaleMelon(f"{m} is not a melon of this graph")
    gone = set(m.nodes)
    a, b = m.boundary
    a2, b2 = g.partners[0][a], g.partners[0][b]
    keep = [x for x in range(g.node_count) if x not in gone]
    if not keep:
        return EdgeColoredGraph.bare_propagator()
    index = {x: i for i, x in enumerate(keep)}
    rows = []
    for c, row in enumerate(g.partners):
        new = []
        for x in keep:
            y = row[x]
            if c == 0 and y in gone:
                # x sits at the far end of a boundary line
                other = b2 if y == a else a2
                y = other if other != -1 else -1
            new.append(index[y] if y != -1 else -1)
        rows.append(tuple(new))
    return EdgeColoredGraph(tuple(rows))


@lru_cache(maxsize=None)
def _base_forms() -> dict[bytes, str]:
    forms = {canonical_form(library.tetra_tetra()): "melonic-base-I"}
    for c in BUBBLE_COLORS:
        forms[canonical_form(library.pillow_double_tadpole(c))] = "melonic-base-II"
        forms[canonical_form(library.infinity(c))] = f"infinity({c})"
    return forms


@dataclass(frozen=True)
class CoreReport:
    core: EdgeColoredGraph
    contractions: tuple[Melon, ...]
    verdict: str

    @property
    def p(self) -> int:
        return sum(m.kind == "I" for m in self.contractions)

    @property
    def q(self) -> int:
        return sum(m.kind == "II" for m in self.contractions)

    @property
    def is_melonic(self) -> bool:
        return self.verdict.startswith("melonic-base")

    @property
    def sector(self) -> str:
        """Verdict with the two melonic bases merged; which base a melonic
        graph ends on can depend on the contraction order."""
        return "melonic" if self.is_melonic else self.verdict

    @property
    def infinity_color(self) -> int | None:
        if self.verdict.startswith("infinity("):
            return int(self.verdict[9])
        return None


def core_verdict(core: EdgeColoredGraph) -> str:
    return _base_forms().get(canonical_form(core), "other-core")


def reduce(g: EdgeColoredGraph, reverse: bool = False) -> CoreReport:
    """Contract melons until none is left and name the resulting core.

    The first melon found is contracted at each step (the last one with
    ``reverse=True``, used to probe order independence).
    """
    if not g.is_closed:
        raise OpenGraph("reduce expects a vacuum graph")
    for nodes, k in _kinds(g):
        if k not in ("tetra", "pillow-1", "pillow-2", "pillow-3"):
            raise UnsupportedBubble(f"bubble on nodes {nodes} is {k!r}, not quartic")
    steps = []
    while True:
        melons = find_melons(g)
        if not melons:
            break
        m = melons[-1] if reverse else melons[0]
        steps.append(m)
        g = contract_melon(g, m)
    return CoreReport(g, tuple(steps), core_verdict(g))


def classify(g: EdgeColoredGraph) -> str | tuple[str, Fraction]:
    """``"LO"`` (degree 0), ``"NLO"`` (degree 1/2) or ``("higher", omega)``."""
    w = degree(g).omega2
    if w == 0:
        return LO
    if w == 1:
        return NLO
    return ("higher", Fraction(w, 2))

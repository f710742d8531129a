"""Edge-colored graphs: bubbles, Feynman graphs, faces, jackets and degree.

A graph lives on nodes ``0 .. n-1``. Colors 1, 2, 3 are perfect matchings
(the bubble edges) and color 0 is a matching of propagator lines, possibly
partial: nodes with no color-0 partner are external legs. Each color class is
stored as a partner array with ``-1`` marking "no partner".

Degrees and scaling weights are kept doubled (``omega2 = 2 * omega``,
``rho2 = 2 * rho``) so that everything stays in the integers.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DisconnectedBubble,
    DisconnectedGraph,
    InternalInconsistency,
    InvalidMatching,
    MalformedFile,
    OddNodeCount,
    OpenGraph,
)

COLORS = (0, 1, 2, 3)
BUBBLE_COLORS = (1, 2, 3)

Pair = tuple[int, int]


def _other_colors(color: int) -> tuple[int, int]:
    i, j = (c for c in BUBBLE_COLORS if c != color)
    return i, j


@dataclass(frozen=True)
class EdgeColoredGraph:
    """Four color classes of matchings on ``node_count`` nodes.

    ``partners[c][x]`` is the color-``c`` neighbour of ``x`` or ``-1``. Only
    color 0 may leave nodes uncovered. ``bare`` marks the degenerate 2-point
    graph made of a single propagator and no node, which is what contracting
    the last melon of an open graph leaves behind.
    """

    partners: tuple[tuple[int, ...], ...]
    bare: bool = False

    def __post_init__(self):
        if len(self.partners) != 4:
            raise InvalidMatching("expected four color classes")
        n = len(self.partners[0])
        if self.bare:
            if n:
                raise InvalidMatching("a bare propagator has no nodes")
            return
        if n == 0:
            raise OddNodeCount("a graph needs at least two nodes")
        if n % 2:
            raise OddNodeCount(f"node count {n} is odd")
        for c, row in enumerate(self.partners):
            if len(row) != n:
                raise InvalidMatching(f"color {c} has {len(row)} entries, expected {n}")
            for x, y in enumerate(row):
                if y == -1:
                    if c != 0:
                        raise InvalidMatching(f"node {x + 1} has no color-{c} edge")
                    continue
                if not 0 <= y < n:
                    raise InvalidMatching(f"color {c}: node id {y + 1} out of range")
                if y == x:
                    raise InvalidMatching(f"color {c}: self pair on node {x + 1}")
                if row[y] != x:
                    raise InvalidMatching(f"color {c}: node {y + 1} is paired twice")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_pairs(
        cls,
        node_count: int,
        pairs: Mapping[int, Iterable[Sequence[int]]],
        one_based: bool = False,
    ) -> "EdgeColoredGraph":
        if node_count <= 0 or node_count % 2:
            raise OddNodeCount(f"node count must be a positive even integer, got {node_count}")
        shift = 1 if one_based else 0
        rows = []
        for c in COLORS:
            row = [-1] * node_count
            for pair in pairs.get(c, ()):
                if len(pair) != 2:
                    raise MalformedFile(f"color {c}: {pair!r} is not a pair")
                x, y = (int(v) - shift for v in pair)
                if not (0 <= x < node_count and 0 <= y < node_count):
                    raise InvalidMatching(f"color {c}: pair {tuple(pair)} out of range")
                if x == y:
                    raise InvalidMatching(f"color {c}: self pair {tuple(pair)}")
                if row[x] != -1 or row[y] != -1:
                    bad = x if row[x] != -1 else y
                    raise InvalidMatching(f"color {c}: node {bad + shift} is repeated")
                row[x], row[y] = y, x
            rows.append(tuple(row))
        return cls(tuple(rows))

    @classmethod
    def bare_propagator(cls) -> "EdgeColoredGraph":
        return cls(((), (), (), ()), bare=True)

    # -- basic accessors --------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self.partners[0])

    @property
    def external(self) -> frozenset[int]:
        return frozenset(x for x, y in enumerate(self.partners[0]) if y == -1)

    @property
    def is_closed(self) -> bool:
        return not self.bare and -1 not in self.partners[0]

    def matching(self, color: int) -> set[Pair]:
        return {(x, y) for x, y in enumerate(self.partners[color]) if x < y}

    def lines(self) -> list[Pair]:
        return sorted(self.matching(0))

    def to_pairs(self, one_based: bool = True) -> dict[int, list[Pair]]:
        s = 1 if one_based else 0
        return {c: [(x + s, y + s) for x, y in sorted(self.matching(c))] for c in COLORS}

    def relabel(self, perm: Sequence[int]) -> "EdgeColoredGraph":
        """Graph with node ``x`` renamed ``perm[x]``."""
        if self.bare:
            return self
        n = self.node_count
        rows = []
        for row in self.partners:
            new = [-1] * n
            for x, y in enumerate(row):
                new[perm[x]] = perm[y] if y != -1 else -1
            rows.append(tuple(new))
        return EdgeColoredGraph(tuple(rows))

    def close(self) -> "EdgeColoredGraph":
        """Join the two external legs of a 2-point graph into one line."""
        ext = sorted(self.external)
        if not ext:
            return self
        if len(ext) != 2:
            raise OpenGraph(f"only 2-point graphs can be closed, got {len(ext)} legs")
        a, b = ext
        row = list(self.partners[0])
        row[a], row[b] = b, a
        return EdgeColoredGraph((tuple(row),) + self.partners[1:])

    def recolor(self, perm: Mapping[int, int]) -> "EdgeColoredGraph":
        """Permute bubble colors; ``perm`` maps old color to new color."""
        rows = [None] * 4
        rows[0] = self.partners[0]
        for c in BUBBLE_COLORS:
            rows[perm[c]] = self.partners[c]
        return EdgeColoredGraph(tuple(rows), bare=self.bare)

    def components(self, colors: Sequence[int] = COLORS) -> list[tuple[int, ...]]:
        """Connected components through edges of ``colors``, ordered by first node."""
        n = self.node_count
        seen = [False] * n
        out = []
        rows = [self.partners[c] for c in colors]
        for start in range(n):
            if seen[start]:
                continue
            seen[start] = True
            stack = [start]
            comp = []
            while stack:
                x = stack.pop()
                comp.append(x)
                for row in rows:
                    y = row[x]
                    if y != -1 and not seen[y]:
                        seen[y] = True
                        stack.append(y)
            out.append(tuple(sorted(comp)))
        return out

    def is_connected(self) -> bool:
        return self.bare or len(self.components()) == 1

    def bubbles(self) -> list[tuple[int, ...]]:
        return self.components(BUBBLE_COLORS)

    def subgraph(self, nodes: Sequence[int]) -> "EdgeColoredGraph":
        """Induced graph on ``nodes`` (kept in the given order); color-0 lines
        leaving the set become external legs."""
        index = {x: i for i, x in enumerate(nodes)}
        rows = []
        for c, row in enumerate(self.partners):
            new = []
            for x in nodes:
                y = row[x]
                if y in index:
                    new.append(index[y])
                elif c == 0:
                    new.append(-1)
                else:
                    raise InvalidMatching("subgraph cuts a bubble edge")
            rows.append(tuple(new))
        return EdgeColoredGraph(tuple(rows))


# ---------------------------------------------------------------------------
# Graph file format
# ---------------------------------------------------------------------------


def parse_graph(text: str) -> EdgeColoredGraph:
    """Parse a graph record, or resolve a built-in name.

    The record is JSON: ``{"nodes": 8, "0": [[1, 5], ...], "1": [...], ...}``
    with 1-based node ids. Color "0" may leave nodes out (external legs).
    """
    from .library import BUILTINS, builtin

    stripped = text.strip()
    if stripped in BUILTINS:
        return builtin(stripped)
    try:
        record = json.loads(stripped)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"not a graph record: {exc}") from None
    if not isinstance(record, dict) or "nodes" not in record:
        raise MalformedFile("graph record must be an object with a 'nodes' field")
    nodes = record["nodes"]
    if not isinstance(nodes, int) or isinstance(nodes, bool):
        raise MalformedFile("'nodes' must be an integer")
    unknown = set(record) - {"nodes", "0", "1", "2", "3"}
    if unknown:
        raise MalformedFile(f"unknown fields: {sorted(unknown)}")
    pairs = {}
    for c in COLORS:
        raw = record.get(str(c), [])
        if not isinstance(raw, list) or not all(
            isinstance(p, list) and all(isinstance(v, int) for v in p) for p in raw
        ):
            raise MalformedFile(f"color {c} must be a list of integer pairs")
        pairs[c] = raw
    return EdgeColoredGraph.from_pairs(nodes, pairs, one_based=True)


def format_graph(g: EdgeColoredGraph) -> str:
    record: dict = {"nodes": g.node_count}
    for c, pairs in g.to_pairs().items():
        record[str(c)] = [list(p) for p in pairs]
    return json.dumps(record)


# ---------------------------------------------------------------------------
# Cycles, bubbles
# ---------------------------------------------------------------------------


def bicolored_cycles(g: EdgeColoredGraph, c1: int, c2: int) -> list[tuple[int, ...]]:
    """Maximal cycles alternating colors ``c1`` and ``c2``.

    Each trace starts at its smallest node and leaves it along ``c1``. Open
    strands ending on external legs are not cycles and are skipped.
    """
    if c1 == c2:
        raise ValueError("need two distinct colors")
    r1, r2 = g.partners[c1], g.partners[c2]
    n = g.node_count
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start] or r1[start] == -1 or r2[start] == -1:
            continue
        trace = []
        x = start
        while True:
            y = r1[x]
            if y == -1:
                break
            seen[x] = seen[y] = True
            trace += (x, y)
            x = r2[y]
            if x == -1 or x == start:
                break
        if x == start:
            cycles.append(tuple(trace))
    return cycles


@dataclass(frozen=True)
class Bubble:
    """A connected 3-colored graph (the color-0 class is ignored)."""

    graph: EdgeColoredGraph
    N_b: int
    F_b: int
    rho2: int
    delta: tuple[int, int, int]

    @classmethod
    def from_graph(cls, graph: EdgeColoredGraph) -> "Bubble":
        if len(graph.components(BUBBLE_COLORS)) != 1:
            raise DisconnectedBubble("a bubble must be connected in colors 1, 2, 3")
        counts = {ell: len(bicolored_cycles(graph, *_other_colors(ell))) for ell in BUBBLE_COLORS}
        F_b = sum(counts.values())
        delta = tuple(counts[ell] - 1 for ell in BUBBLE_COLORS)
        rho2 = F_b - 3
        if rho2 != sum(delta):
            raise InternalInconsistency("face count and jacket splitting disagree on rho")
        return cls(graph, graph.node_count, F_b, rho2, delta)

    @property
    def rho(self) -> Fraction:
        return Fraction(self.rho2, 2)

    @property
    def kind(self) -> str:
        return bubble_kind(self.graph)


def bubble_invariants(b: Bubble | EdgeColoredGraph) -> tuple[int, int, Fraction, int, int, int]:
    """``(N_b, F_b, rho, delta_1, delta_2, delta_3)``."""
    if isinstance(b, EdgeColoredGraph):
        b = Bubble.from_graph(b)
    return (b.N_b, b.F_b, b.rho, *b.delta)


def bubble_kind(g: EdgeColoredGraph, nodes: Sequence[int] | None = None) -> str:
    """'b2', 'tetra', 'pillow-<color>' or 'other' for the bubble on ``nodes``."""
    if nodes is None:
        nodes = range(g.node_count)
    nodes = tuple(nodes)
    if len(nodes) == 2:
        return "b2"
    if len(nodes) != 4:
        return "other"
    x = nodes[0]
    p1, p2, p3 = (g.partners[c][x] for c in BUBBLE_COLORS)
    if p1 != p2 and p2 != p3 and p1 != p3:
        return "tetra"
    if p1 == p2 == p3:
        return "other"
    if p2 == p3:
        return "pillow-1"
    if p1 == p3:
        return "pillow-2"
    return "pillow-3"


def graph_bubbles(g: EdgeColoredGraph) -> list[tuple[tuple[int, ...], Bubble]]:
    out = []
    for nodes in g.bubbles():
        out.append((nodes, Bubble.from_graph(g.subgraph(nodes))))
    return out


# ---------------------------------------------------------------------------
# Faces, jackets, degree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Face:
    color: int
    length: int
    trace: tuple[int, ...]


def _require_closed(g: EdgeColoredGraph) -> None:
    if not g.is_closed:
        raise OpenGraph("graph has external legs; close it first")


def faces(g: EdgeColoredGraph) -> list[Face]:
    """All faces ``(0, l)``; the length of a face is its number of lines."""
    _require_closed(g)
    out = []
    for ell in BUBBLE_COLORS:
        for trace in bicolored_cycles(g, 0, ell):
            out.append(Face(ell, len(trace) // 2, trace))
    return out


@dataclass(frozen=True)
class JacketComponent:
    nodes: tuple[int, ...]
    v: int
    e: int
    f: int

    @property
    def k(self) -> int:
        """Demigenus of the surface, from Euler's relation."""
        return 2 - self.v + self.e - self.f


@dataclass(frozen=True)
class JacketReport:
    color: int
    components: tuple[JacketComponent, ...]

    @property
    def delta(self) -> int:
        return len(self.components) - 1

    @property
    def f(self) -> int:
        return sum(c.f for c in self.components)

    @property
    def k(self) -> int:
        return sum(c.k for c in self.components)


def jackets(g: EdgeColoredGraph) -> tuple[JacketReport, JacketReport, JacketReport]:
    _require_closed(g)
    reports = []
    for ell in BUBBLE_COLORS:
        i, j = _other_colors(ell)
        comps = g.components((0, i, j))
        where = {}
        for idx, comp in enumerate(comps):
            for x in comp:
                where[x] = idx
        v = [0] * len(comps)
        e = [0] * len(comps)
        f = [0] * len(comps)
        for cyc in bicolored_cycles(g, i, j):
            v[where[cyc[0]]] += 1
        for x, y in enumerate(g.partners[0]):
            if x < y:
                e[where[x]] += 1
        for c in (i, j):
            for cyc in bicolored_cycles(g, 0, c):
                f[where[cyc[0]]] += 1
        reports.append(
            JacketReport(
                ell,
                tuple(JacketComponent(comp, v[t], e[t], f[t]) for t, comp in enumerate(comps)),
            )
        )
    return tuple(reports)


@dataclass(frozen=True)
class DegreeReport:
    faces: tuple[Face, ...]
    L: int
    bubble_counts: Mapping[str, int]
    jackets: tuple[JacketReport, JacketReport, JacketReport]
    omega2: int
    omega2_direct: int = field(repr=False)
    omega2_jacket: int = field(repr=False)

    @property
    def F(self) -> int:
        return len(self.faces)

    @property
    def omega(self) -> Fraction:
        return Fraction(self.omega2, 2)

    @property
    def amplitude_exponent(self) -> Fraction:
        """Exponent of N in the amplitude, ``3 - omega``."""
        return 3 - self.omega

    def face_lengths(self) -> Counter:
        return Counter(f.length for f in self.faces)


def degree(g: EdgeColoredGraph) -> DegreeReport:
    """Degree of a connected vacuum graph, computed twice.

    The direct route counts lines, faces and bubble weights; the jacket route
    sums demigenera and component splittings. Both are exact integers (twice
    the degree); any disagreement raises :class:`InternalInconsistency`.
    Two-node bubbles are kept in the sums; they contribute zero to both.
    """
    _require_closed(g)
    if not g.is_connected():
        raise DisconnectedGraph("degree is defined for connected graphs")
    face_list = faces(g)
    L = g.node_count // 2
    bubs = graph_bubbles(g)
    weight = sum(3 - b.rho2 for _, b in bubs)
    omega2_direct = 6 + 3 * L - weight - 2 * len(face_list)

    jacks = jackets(g)
    ksum = sum(j.k for j in jacks)
    split = sum(sum(b.delta) for _, b in bubs)
    omega2_jacket = ksum + 2 * split - 2 * sum(j.delta for j in jacks)

    if omega2_direct != omega2_jacket:
        raise InternalInconsistency(
            f"degree formulas disagree: direct 2w={omega2_direct}, jacket 2w={omega2_jacket}"
        )
    if 2 * len(face_list) != sum(j.f for j in jacks):
        raise InternalInconsistency("jacket face counts do not add up to 2F")
    counts = Counter(b.kind if b.kind != "other" else f"N{b.N_b}" for _, b in bubs)
    return DegreeReport(
        tuple(face_list), L, dict(sorted(counts.items())), jacks, omega2_direct,
        omega2_direct, omega2_jacket,
    )


def is_bipartite(g: EdgeColoredGraph) -> bool:
    color = [-1] * g.node_count
    for start in range(g.node_count):
        if color[start] != -1:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            x = stack.pop()
            for row in g.partners:
                y = row[x]
                if y == -1:
                    continue
                if color[y] == -1:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return False
    return True


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------
#
# Every node carries at most one edge of each color, so once a root is fixed
# a breadth-first traversal visiting colors in order 0..3 labels a connected
# graph without any choice. The canonical labeling is the traversal whose code
# (partner labels, node by node) is lexicographically smallest over all roots;
# isomorphisms of connected graphs are exactly the root pairs with equal codes.


def _traverse(partners, n: int, root: int, best):
    """BFS code from ``root``; returns ``(code, order)`` or ``None`` as soon as
    the code is known to exceed ``best``."""
    label = [-1] * n
    label[root] = 0
    order = [root]
    code = []
    pos = 0
    tight = best is not None
    while pos < len(order):
        x = order[pos]
        for row in partners:
            y = row[x]
            if y == -1:
                v = -1
            else:
                v = label[y]
                if v == -1:
                    v = label[y] = len(order)
                    order.append(y)
            if tight:
                b = best[len(code)]
                if v > b:
                    return None
                if v < b:
                    tight = False
            code.append(v)
        pos += 1
    return code, order


def _signature(partners, x: int) -> tuple:
    """Cheap isomorphism-invariant fingerprint of the neighbourhood of ``x``."""
    p0, p1, p2, p3 = (row[x] for row in partners)
    y = p0
    if y == -1:
        return (p1 == p2, p2 == p3, p1 == p3, -1)
    return (
        p1 == p2, p2 == p3, p1 == p3,
        (y == p1) + 2 * (y == p2) + 4 * (y == p3),
        partners[1][y] == partners[2][y], partners[2][y] == partners[3][y],
        partners[0][p1] == partners[1][y], partners[0][p2] == partners[2][y],
        partners[0][p3] == partners[3][y],
    )


def _roots(partners, comp: Sequence[int]) -> list[int]:
    """Traversal roots: the smallest class of equal signatures (ties broken by
    the signature itself), which any isomorphism maps onto its counterpart."""
    groups: dict = {}
    for x in comp:
        groups.setdefault(_signature(partners, x), []).append(x)
    key = min(groups, key=lambda s: (len(groups[s]), s))
    return groups[key]


def _component_codes(g: EdgeColoredGraph, comp: Sequence[int], all_roots: bool = False):
    """Minimal code of a component and all traversal orders achieving it."""
    best = None
    orders = []
    n = g.node_count
    for r in (comp if all_roots else _roots(g.partners, comp)):
        res = _traverse(g.partners, n, r, best)
        if res is None:
            continue
        code, order = res
        if best is None or code < best:
            best, orders = code, [order]
        elif code == best:
            orders.append(order)
    return best, orders


def canonical_labeling(g: EdgeColoredGraph) -> list[int]:
    """Permutation ``perm`` such that ``g.relabel(perm)`` is canonical."""
    parts = []
    for comp in g.components():
        code, orders = _component_codes(g, comp)
        parts.append((len(comp), code, orders[0]))
    parts.sort(key=lambda t: (t[0], t[1]))
    perm = [0] * g.node_count
    nxt = 0
    for _, _, order in parts:
        for x in order:
            perm[x] = nxt
            nxt += 1
    return perm


def _encode(g: EdgeColoredGraph) -> bytes:
    rows = ";".join(",".join(str(y) for y in row) for row in g.partners)
    return f"{g.node_count}|{rows}".encode()


def canonical_form(g: EdgeColoredGraph, color_orbit: bool = False) -> bytes:
    """Byte string equal for two graphs iff a color-preserving node relabeling
    maps one onto the other. With ``color_orbit`` the minimum is also taken
    over the six permutations of colors 1, 2, 3."""
    if g.bare:
        return b"bare"
    if color_orbit:
        from itertools import permutations

        return min(
            canonical_form(g.recolor(dict(zip(BUBBLE_COLORS, p))))
            for p in permutations(BUBBLE_COLORS)
        )
    return _encode(g.relabel(canonical_labeling(g)))


def from_canonical(form: bytes | str) -> EdgeColoredGraph:
    if isinstance(form, bytes):
        form = form.decode()
    if form == "bare":
        return EdgeColoredGraph.bare_propagator()
    head, _, body = form.partition("|")
    rows = tuple(tuple(int(v) for v in row.split(",")) for row in body.split(";"))
    if len(rows[0]) != int(head):
        raise MalformedFile("canonical form length mismatch")
    return EdgeColoredGraph(rows)


def automorphism_count(g: EdgeColoredGraph) -> int:
    """Order of the color-preserving automorphism group."""
    from math import factorial

    classes = Counter()
    total = 1
    for comp in g.components():
        code, orders = _component_codes(g, comp)
        classes[tuple(code)] += 1
        total *= len(orders)
    for m in classes.values():
        total *= factorial(m)
    return total


def automorphisms(g: EdgeColoredGraph) -> list[tuple[int, ...]]:
    """All color-preserving automorphisms of a connected graph, as node maps."""
    if not g.is_connected():
        raise DisconnectedGraph("automorphisms() expects a connected graph")
    _, orders = _component_codes(g, range(g.node_count))
    base = orders[0]
    out = []
    for order in orders:
        perm = [0] * g.node_count
        for a, b in zip(base, order):
            perm[a] = b
        out.append(tuple(perm))
    return sorted(out)

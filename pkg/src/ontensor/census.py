"""Exhaustive census of quartic vacuum graphs.

Bubble copies (tetrahedra first, then pillows of color 1, 2, 3) occupy
consecutive blocks of four nodes; a vacuum graph is a perfect matching of all
nodes by propagators. The group ``H`` of relabelings that fix the bubble
edges (automorphisms of each copy, permutations of identical copies) acts on
matchings, and isomorphism classes are exactly its orbits. The search walks
matchings choosing one partner per orbit of the current stabilizer, so it
visits every orbit at least once while skipping most of the ``(4B - 1)!!``
labelled matchings; leaves are deduplicated by canonical form and each class
gets its labelled multiplicity ``|H| / |Aut(G)|``.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product

import numpy as np

from . import library
from .errors import BudgetExceeded, ValidationError
from .graphs import (
    EdgeColoredGraph,
    automorphism_count,
    automorphisms,
    canonical_form,
    degree,
    faces,
    format_graph,
    from_canonical,
)
from .melonics import reduce

DEFAULT_NODE_BUDGET = 24


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


@dataclass(frozen=True)
class CensusClass:
    canonical: str
    graph: EdgeColoredGraph
    multiplicity: int
    omega2: int
    verdict: str

    @property
    def omega(self) -> Fraction:
        return Fraction(self.omega2, 2)


@dataclass(frozen=True)
class CensusReport:
    n1: int
    n2: tuple[int, int, int]
    classes: tuple[CensusClass, ...]
    disconnected: int
    labelled_total: int

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def omega_counts(self) -> dict[Fraction, int]:
        return dict(sorted(Counter(c.omega for c in self.classes).items()))

    @property
    def node_count(self) -> int:
        return 4 * (self.n1 + sum(self.n2))

    @property
    def expected_total(self) -> int:
        return double_factorial(self.node_count - 1)


def _layout(n1: int, n2):
    blocks = [library.tetra()] * n1
    for c, k in zip((1, 2, 3), n2):
        blocks += [library.pillow(c)] * k
    n = 4 * len(blocks)
    rows = [[-1] * n for _ in range(4)]
    for b, bub in enumerate(blocks):
        for c in (1, 2, 3):
            for x, y in enumerate(bub.partners[c]):
                rows[c][4 * b + x] = 4 * b + y
    return blocks, rows


def _symmetry_group(n1: int, n2) -> np.ndarray:
    """All elements of H as rows of a node-permutation array."""
    kinds = [("tetra", n1)] + [(f"pillow-{c}", k) for c, k in zip((1, 2, 3), n2)]
    autos = {
        "tetra": automorphisms(library.tetra()),
        **{f"pillow-{c}": automorphisms(library.pillow(c)) for c in (1, 2, 3)},
    }
    per_kind = []
    start = 0
    for kind, k in kinds:
        blocks = list(range(start, start + k))
        start += k
        options = []
        for order in permutations(blocks):
            for auts in product(autos[kind], repeat=k):
                m = {}
                for src, dst, a in zip(blocks, order, auts):
                    for x in range(4):
                        m[4 * src + x] = 4 * dst + a[x]
                options.append(m)
        per_kind.append(options)
    n = 4 * start
    rows = []
    for combo in product(*per_kind):
        perm = [0] * n
        for m in combo:
            for x, y in m.items():
                perm[x] = y
        rows.append(perm)
    dtype = np.uint8 if n < 256 else np.uint16
    return np.array(rows, dtype=dtype)


def _search(n: int, group: np.ndarray, partial: list[int], out: dict, skeleton) -> None:
    """Depth-first matching search pruned by stabilizer orbits."""
    try:
        u = partial.index(-1)
    except ValueError:
        g = EdgeColoredGraph((tuple(partial),) + skeleton)
        form = canonical_form(g)
        if form not in out:
            out[form] = g
        return
    free = [v for v in range(u + 1, n) if partial[v] == -1]
    if len(group) > 1:
        stab = group[group[:, u] == u]
        cols = stab[:, free]
        reps = [v for v, col in zip(free, cols.T) if col.min() == v]
    else:
        stab = group
        reps = free
    for v in reps:
        if len(stab) > 1:
            # new pair {u, v} must be preserved; u is already fixed
            keep = stab[stab[:, v] == v]
        else:
            keep = stab
        partial[u], partial[v] = v, u
        _search(n, keep, partial, out, skeleton)
        partial[u] = partial[v] = -1


def _search_branch(args):
    n1, n2, v = args
    _, rows = _layout(n1, n2)
    group = _symmetry_group(n1, n2)
    n = len(rows[0])
    skeleton = tuple(tuple(r) for r in rows[1:])
    partial = [-1] * n
    partial[0], partial[v] = v, 0
    stab = group[(group[:, 0] == 0) & (group[:, v] == v)]
    out: dict = {}
    _search(n, stab, partial, out, skeleton)
    return out


def _root_reps(group: np.ndarray, n: int) -> list[int]:
    stab = group[group[:, 0] == 0]
    return [v for v in range(1, n) if stab[:, v].min() == v]


def enumerate_vacuum(
    n1: int,
    n2_by_color=(0, 0, 0),
    max_nodes: int = DEFAULT_NODE_BUDGET,
    workers: int = 1,
) -> CensusReport:
    """All connected vacuum graphs on ``n1`` tetrahedra and the given pillows,
    up to color-preserving isomorphism, with degree and core verdict."""
    n2 = tuple(int(k) for k in n2_by_color)
    if len(n2) != 3 or n1 < 0 or min(n2) < 0:
        raise ValidationError("need n1 >= 0 and three non-negative pillow counts")
    n = 4 * (n1 + sum(n2))
    if n == 0:
        raise ValidationError("need at least one bubble")
    if n > max_nodes:
        raise BudgetExceeded(f"{n} nodes exceed the budget of {max_nodes}")

    group = _symmetry_group(n1, n2)
    order = len(group)
    branches = [(n1, n2, v) for v in _root_reps(group, n)]
    found: dict = {}
    if workers > 1 and len(branches) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_search_branch, branches))
    else:
        parts = [_search_branch(b) for b in branches]
    for part in parts:
        for form, g in part.items():
            found.setdefault(form, g)

    classes = []
    disconnected = 0
    for form in sorted(found):
        g = from_canonical(form)
        mult = order // automorphism_count(g)
        if not g.is_connected():
            disconnected += mult
            continue
        classes.append(
            CensusClass(form.decode(), g, mult, degree(g).omega2, reduce(g).verdict)
        )
    total = disconnected + sum(c.multiplicity for c in classes)
    return CensusReport(n1, n2, tuple(classes), disconnected, total)


def census_configurations(max_nodes: int):
    """Every ``(n1, (n2_1, n2_2, n2_3))`` with at least one bubble within budget."""
    top = max_nodes // 4
    for total in range(1, top + 1):
        for n1 in range(total, -1, -1):
            rest = total - n1
            for a in range(rest, -1, -1):
                for b in range(rest - a, -1, -1):
                    yield n1, (a, b, rest - a - b)


# ---------------------------------------------------------------------------
# Theorem checks
# ---------------------------------------------------------------------------


@dataclass
class TheoremCheck:
    half_integral: bool = True
    lo_is_melonic: bool = True
    nlo_is_infinity: bool = True
    lo_faces: bool = True
    multiplicities: bool = True
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.half_integral and self.lo_is_melonic and self.nlo_is_infinity
            and self.lo_faces and self.multiplicities
        )


def census_theorem_check(report: CensusReport) -> TheoremCheck:
    """(a) degrees in N/2 and >= 0; (b) degree 0 iff melonic core; (c) degree
    1/2 iff infinity core; (d) without pillows, degree-0 graphs have no face
    of length 1 or 3 and at least six faces of length 2. Also checks that the
    multiplicities add up to the number of labelled matchings."""
    chk = TheoremCheck()
    pure = not any(report.n2)
    for c in report.classes:
        tag = c.canonical
        if not isinstance(c.omega2, int) or c.omega2 < 0:
            chk.half_integral = False
            chk.failures.append(f"(a) omega2={c.omega2} on {tag}")
        melonic = c.verdict.startswith("melonic-base")
        if (c.omega2 == 0) != melonic:
            chk.lo_is_melonic = False
            chk.failures.append(f"(b) omega2={c.omega2} verdict={c.verdict} on {tag}")
        inf = c.verdict.startswith("infinity(")
        if (c.omega2 == 1) != inf:
            chk.nlo_is_infinity = False
            chk.failures.append(f"(c) omega2={c.omega2} verdict={c.verdict} on {tag}")
        if pure and c.omega2 == 0:
            lengths = Counter(f.length for f in faces(c.graph))
            if lengths[1] or lengths[3] or lengths[2] < 6:
                chk.lo_faces = False
                chk.failures.append(f"(d) face lengths {dict(lengths)} on {tag}")
    if report.labelled_total != report.expected_total:
        chk.multiplicities = False
        chk.failures.append(
            f"multiplicities sum to {report.labelled_total}, expected {report.expected_total}"
        )
    return chk


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

CSV_HEADER = [
    "canonical_form (text)", "n1 (exact int)", "n2_1 (exact int)", "n2_2 (exact int)",
    "n2_3 (exact int)", "multiplicity (exact int)", "two_omega (exact int)", "verdict (text)",
]


def census_rows(report: CensusReport):
    for c in report.classes:
        yield [c.canonical, report.n1, *report.n2, c.multiplicity, c.omega2, c.verdict]


def write_census_csv(reports, fh=None, header: bool = True) -> str:
    buf = fh or io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(CSV_HEADER)
    for rep in reports:
        for row in census_rows(rep):
            w.writerow(row)
    return buf.getvalue() if fh is None else ""


def graph_bundle(report: CensusReport) -> str:
    """One graph record per line for every class representative."""
    return "".join(format_graph(c.graph) + "\n" for c in report.classes)


def color_orbit_classes(report: CensusReport) -> dict[bytes, list[CensusClass]]:
    """Group classes whose graphs differ only by a permutation of colors."""
    out: dict = {}
    for c in report.classes:
        out.setdefault(canonical_form(c.graph, color_orbit=True), []).append(c)
    return out

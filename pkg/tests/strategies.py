"""Hypothesis strategies for edge-colored graphs."""

from hypothesis import strategies as st

from ontensor.census import _layout
from ontensor.graphs import EdgeColoredGraph


def matching_from_order(order):
    row = [0] * len(order)
    for i in range(0, len(order), 2):
        a, b = order[i], order[i + 1]
        row[a], row[b] = b, a
    return tuple(row)


@st.composite
def colored_graphs(draw, max_pairs=6):
    """Any closed 4-colored graph: four independent perfect matchings."""
    n = 2 * draw(st.integers(1, max_pairs))
    rows = tuple(matching_from_order(draw(st.permutations(range(n)))) for _ in range(4))
    return EdgeColoredGraph(rows)


@st.composite
def quartic_graphs(draw, max_bubbles=3):
    """Vacuum graphs of the quartic model (tetrahedra and pillows)."""
    total = draw(st.integers(1, max_bubbles))
    kinds = draw(st.lists(st.integers(0, 3), min_size=total, max_size=total))
    n1 = kinds.count(0)
    n2 = tuple(kinds.count(c) for c in (1, 2, 3))
    _, rows = _layout(n1, n2)
    n = len(rows[0])
    zero = matching_from_order(draw(st.permutations(range(n))))
    return EdgeColoredGraph((zero,) + tuple(tuple(r) for r in rows[1:]))


def relabelings(n):
    return st.permutations(range(n))

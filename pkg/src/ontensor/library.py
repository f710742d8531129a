"""Built-in bubbles and small Feynman graphs, addressable by name."""

from __future__ import annotations

from .graphs import EdgeColoredGraph

# tetrahedron: the three perfect matchings of four nodes, one per color
_TETRA = {1: [(1, 2), (3, 4)], 2: [(1, 3), (2, 4)], 3: [(1, 4), (2, 3)]}


def tetra() -> EdgeColoredGraph:
    return EdgeColoredGraph.from_pairs(4, _TETRA, one_based=True)


def pillow(color: int) -> EdgeColoredGraph:
    """Pillow whose ``color`` edges cross between the two double-edge pairs
    {1,2} and {3,4}; deleting ``color`` splits it in two."""
    pairs = {c: [(1, 2), (3, 4)] for c in (1, 2, 3)}
    pairs[color] = [(1, 3), (2, 4)]
    return EdgeColoredGraph.from_pairs(4, pairs, one_based=True)


def b2() -> EdgeColoredGraph:
    return EdgeColoredGraph.from_pairs(2, {c: [(1, 2)] for c in (1, 2, 3)}, one_based=True)


def tetra_tetra() -> EdgeColoredGraph:
    """Two tetrahedra with all four propagators parallel."""
    pairs = {c: _TETRA[c] + [(x + 4, y + 4) for x, y in _TETRA[c]] for c in (1, 2, 3)}
    pairs[0] = [(1, 5), (2, 6), (3, 7), (4, 8)]
    return EdgeColoredGraph.from_pairs(8, pairs, one_based=True)


def pillow_double_tadpole(color: int) -> EdgeColoredGraph:
    """A pillow with a tadpole on each of its double-edge pairs."""
    g = pillow(color)
    pairs = g.to_pairs()
    pairs[0] = [(1, 2), (3, 4)]
    return EdgeColoredGraph.from_pairs(4, pairs, one_based=True)


def infinity(color: int) -> EdgeColoredGraph:
    """A tetrahedron whose two tadpoles follow its ``color`` matching."""
    pairs = dict(_TETRA)
    pairs[0] = _TETRA[color]
    return EdgeColoredGraph.from_pairs(4, pairs, one_based=True)


def melon_type1_open() -> EdgeColoredGraph:
    """Two-point type-I melon: tetra-tetra with the (4, 8) line cut."""
    g = tetra_tetra()
    row = list(g.partners[0])
    row[3] = row[7] = -1
    return EdgeColoredGraph((tuple(row),) + g.partners[1:])


def melon_type2_open(color: int = 1) -> EdgeColoredGraph:
    """Two-point type-II melon: pillow with one tadpole, legs on 3 and 4."""
    pairs = pillow(color).to_pairs()
    pairs[0] = [(1, 2)]
    return EdgeColoredGraph.from_pairs(4, pairs, one_based=True)


BUILTINS = {
    "tetra": tetra,
    "b2": b2,
    "tetra-tetra": tetra_tetra,
    "melon-I": melon_type1_open,
    **{f"pillow-{c}": (lambda c=c: pillow(c)) for c in (1, 2, 3)},
    **{f"pillow-double-tadpole-{c}": (lambda c=c: pillow_double_tadpole(c)) for c in (1, 2, 3)},
    "pillow-double-tadpole": lambda: pillow_double_tadpole(1),
    **{f"infinity-{c}": (lambda c=c: infinity(c)) for c in (1, 2, 3)},
    **{f"melon-II-{c}": (lambda c=c: melon_type2_open(c)) for c in (1, 2, 3)},
}


def builtin(name: str) -> EdgeColoredGraph:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown built-in graph {name!r}") from None

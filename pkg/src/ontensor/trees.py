"""Brute-force generation of binary-quaternary plane trees.

A tree is either the leaf ``()`` or a tuple of 4 or 2 ordered subtrees. This
module never uses the closed-form count; it is the oracle that the formula in
:mod:`ontensor.series` is checked against.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator

from .errors import BudgetExceeded, ValidationError

PlaneTree = tuple
LEAF: PlaneTree = ()

DEFAULT_TREE_BUDGET = 20


def _compositions(p: int, q: int, parts: int):
    """Ways to distribute ``p`` quaternary and ``q`` binary vertices over
    ``parts`` ordered subtrees."""
    if parts == 1:
        yield ((p, q),)
        return
    for p0 in range(p + 1):
        for q0 in range(q + 1):
            for rest in _compositions(p - p0, q - q0, parts - 1):
                yield ((p0, q0),) + rest


@lru_cache(maxsize=None)
def _trees(p: int, q: int) -> tuple[PlaneTree, ...]:
    if p == 0 and q == 0:
        return (LEAF,)
    out = []
    for arity, rest in ((4, (p - 1, q)), (2, (p, q - 1))):
        if min(rest) < 0:
            continue
        for split in _compositions(*rest, arity):
            for kids in product(*(_trees(*s) for s in split)):
                out.append(kids)
    return tuple(out)


def generate_trees(p: int, q: int, budget: int = DEFAULT_TREE_BUDGET) -> Iterator[PlaneTree]:
    _check(p, q, budget)
    yield from _trees(p, q)


def enumerate_trees(p: int, q: int, budget: int = DEFAULT_TREE_BUDGET) -> int:
    """Number of plane trees with ``p`` quaternary and ``q`` binary vertices."""
    _check(p, q, budget)
    return sum(1 for _ in _trees(p, q))


def _check(p: int, q: int, budget: int) -> None:
    if p < 0 or q < 0:
        raise ValidationError("p and q must be non-negative")
    if 4 * p + 2 * q > budget:
        raise BudgetExceeded(f"4p + 2q = {4 * p + 2 * q} exceeds the tree budget {budget}")


def arity_counts(t: PlaneTree) -> tuple[int, int]:
    if not t:
        return 0, 0
    p, q = (1, 0) if len(t) == 4 else (0, 1)
    for kid in t:
        a, b = arity_counts(kid)
        p, q = p + a, q + b
    return p, q


def leaf_count(t: PlaneTree, include_root: bool = True) -> int:
    """Leaves of the tree; the root vertex above the top node counts as one."""
    def leaves(s):
        return 1 if not s else sum(leaves(k) for k in s)

    return leaves(t) + (1 if include_root else 0)

"""Isomorphism and automorphism search by individualisation-refinement.

Both graphs are refined together as one disjoint union, so colour values are
directly comparable.  The search individualises a vertex of the first graph
in the smallest non-trivial cell and branches over the matching cell of the
second graph.  Leaves are verified edge by edge.
"""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .config import get_limits
from .errors import BudgetExceeded
from .graph import Graph, disjoint_union

_INDIV = np.uint64(0x5BD1E9955BD1E995)


def refine(g: Graph, colours: np.ndarray) -> np.ndarray:
    """Colour refinement to the coarsest stable partition below ``colours``."""
    ptr, idx = g.csr
    return kernels.cr_refine(colours, ptr, idx)[0]


def _initial(n: int, colours: Sequence[int] | None) -> np.ndarray:
    base = np.zeros(n, dtype=np.uint64) if colours is None else np.asarray(colours, dtype=np.int64).astype(np.uint64)
    return kernels.mix_array(np.full(n, kernels.SEED_CR, np.uint64), base)


def _search(g1: Graph, g2: Graph, c1, c2) -> Iterator[tuple]:
    n = g1.n
    union = disjoint_union(g1, g2)
    init = np.concatenate([_initial(n, c1), _initial(n, c2)])
    a1, a2 = g1.adjacency, g2.adjacency
    budget = get_limits().max_assignments
    nodes = 0

    def rec(colours):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("isomorphism search exceeded the budget")
        colours = refine(union, colours)
        left, right = colours[:n], colours[n:]
        if not np.array_equal(np.sort(left), np.sort(right)):
            return
        vals, first, counts = np.unique(left, return_index=True, return_counts=True)
        if counts.max(initial=1) == 1:
            where = {int(c): i for i, c in enumerate(right)}
            perm = tuple(where[int(c)] for c in left)
            if all(a2[perm[u], perm[v]] for u, v in g1.edges):
                yield perm
            return
        multi = counts > 1
        best = min(zip(counts[multi], first[multi]))
        v = int(best[1])
        cell = np.nonzero(right == left[v])[0]
        for w in cell:
            c = colours.copy()
            tag = kernels.mix_array(colours[v], _INDIV)
            c[v] = tag
            c[n + int(w)] = tag
            yield from rec(c)

    if n == 0:
        yield ()
        return
    yield from rec(init)


def _quick_reject(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.m != g2.m:
        return True
    d1 = sorted(len(x) for x in g1.neighbours)
    d2 = sorted(len(x) for x in g2.neighbours)
    return d1 != d2


def find_isomorphism(g1: Graph, g2: Graph, colours1=None, colours2=None) -> tuple | None:
    """A bijection ``perm`` with ``{perm[u], perm[v]} in E(g2)`` iff ``{u, v} in E(g1)``.

    Optional integer vertex colours must be preserved.
    """
    if _quick_reject(g1, g2):
        return None
    if (colours1 is None) != (colours2 is None):
        raise ValueError("give colours for both graphs or neither")
    if colours1 is not None and sorted(colours1) != sorted(colours2):
        return None
    for perm in _search(g1, g2, colours1, colours2):
        if colours1 is None or all(colours1[v] == colours2[perm[v]] for v in range(g1.n)):
            return perm
    return None


def is_isomorphic(g1: Graph, g2: Graph, colours1=None, colours2=None) -> bool:
    return find_isomorphism(g1, g2, colours1, colours2) is not None


def automorphisms(g: Graph, colours=None) -> list:
    """Every automorphism of ``g`` (preserving ``colours`` if given), as tuples."""
    out = sorted(set(_search(g, g, colours, colours)))
    if colours is not None:
        out = [p for p in out if all(colours[v] == colours[p[v]] for v in range(g.n))]
    return out


def compose(p: Sequence[int], q: Sequence[int]) -> tuple:
    """``(p o q)[v] = p[q[v]]``."""
    return tuple(p[x] for x in q)


def inverse(p: Sequence[int]) -> tuple:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)

"""Exact treewidth, the extension graph and the l-copy construction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from ._accel import PURE
from .config import get_limits
from .errors import OutOfScope, WldimError
from .graph import Graph
from .query import ConjunctiveQuery, minimize, require_connected

# subset table size limit for the compiled DP; larger graphs use the memoised search
TABLE_MAX_VERTICES = 20


@dataclass(frozen=True)
class TreeDecomposition:
    tree: Graph
    bags: tuple

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def to_json(self) -> dict:
        return {"bags": [list(b) for b in self.bags], "edges": [list(e) for e in self.tree.edges]}


def validate_decomposition(g: Graph, td: TreeDecomposition) -> list:
    """Names of violated conditions (empty when valid)."""
    bad = []
    t = td.tree
    if t.n != len(td.bags) or t.n == 0:
        return ["shape"]
    if t.m != t.n - 1 or not t.is_connected():
        bad.append("tree")
    covered = set().union(*map(set, td.bags))
    if any(v not in covered for v in range(g.n)):
        bad.append("T1")
    for v in range(g.n):
        nodes = [i for i, b in enumerate(td.bags) if v in b]
        if nodes and not t.induced(nodes).is_connected():
            bad.append("T2")
            break
    for u, v in g.edges:
        if not any(u in b and v in b for b in td.bags):
            bad.append("T3")
            break
    return bad


def _frontier_mask(s: int, v: int, adjmask) -> int:
    """Vertices outside ``s + v`` reachable from ``v`` through ``s``."""
    reach = 1 << v
    nb = adjmask[v]
    frontier = nb & s & ~reach
    while frontier:
        reach |= frontier
        new = 0
        f = frontier
        while f:
            low = f & -f
            new |= adjmask[low.bit_length() - 1]
            f ^= low
        nb |= new
        frontier = new & s & ~reach
    return nb & ~s & ~(1 << v)


def _elim_degree(s: int, v: int, adjmask) -> int:
    return bin(_frontier_mask(s, v, adjmask)).count("1")


def _feasibility_oracle(g: Graph):
    """Returns ``(width, feasible)``; ``feasible(s)`` says whether the vertices
    outside ``s`` can be eliminated within ``width``."""
    n = g.n
    full = (1 << n) - 1
    if not PURE and n <= TABLE_MAX_VERTICES:
        table = kernels.treewidth_table(np.asarray(g.adjmask, dtype=np.int64), n)
        tw = int(table[0])
        return tw, lambda s: int(table[s]) <= tw

    adj = g.adjmask

    def decide(t):
        @lru_cache(maxsize=None)
        def ok(s):
            if s == full:
                return True
            for v in range(n):
                if not (s >> v) & 1 and _elim_degree(s, v, adj) <= t and ok(s | (1 << v)):
                    return True
            return False

        return ok

    lo = min((len(x) for x in g.neighbours), default=0)
    t = lo
    while True:
        ok = decide(t)
        if ok(0):
            return t, ok
        t += 1


def treewidth(g: Graph):
    """``(width, TreeDecomposition)`` for the exact treewidth of ``g``.

    The decomposition comes from the lexicographically smallest optimal
    elimination ordering.
    """
    cap = get_limits().max_treewidth_vertices
    if g.n > cap:
        raise OutOfScope(f"graph with {g.n} vertices exceeds the exact treewidth cap {cap}")
    if g.n == 0:
        return -1, TreeDecomposition(Graph(1), ((),))
    tw, feasible = _feasibility_oracle(g)
    order = []
    s = 0
    adj = g.adjmask
    for _ in range(g.n):
        for v in range(g.n):
            if (s >> v) & 1:
                continue
            if _elim_degree(s, v, adj) <= tw and feasible(s | (1 << v)):
                order.append(v)
                s |= 1 << v
                break
        else:  # pragma: no cover - oracle guarantees progress
            raise WldimError("treewidth reconstruction failed")
    return tw, decomposition_from_ordering(g, order)


def treewidth_value(g: Graph) -> int:
    return treewidth(g)[0]


def elimination_width(g: Graph, order) -> int:
    s = 0
    w = -1 if g.n == 0 else 0
    for v in order:
        w = max(w, _elim_degree(s, v, g.adjmask))
        s |= 1 << v
    return w


def decomposition_from_ordering(g: Graph, order) -> TreeDecomposition:
    pos = {v: i for i, v in enumerate(order)}
    bags = []
    parent = []
    s = 0
    adj = g.adjmask
    for v in order:
        reach_nb = _later_neighbours(s, v, adj)
        bags.append(tuple(sorted([v] + reach_nb)))
        parent.append(min((pos[u] for u in reach_nb), default=None))
        s |= 1 << v
    edges = []
    roots = []
    for i, p in enumerate(parent):
        if p is None:
            roots.append(i)
        else:
            edges.append((i, p))
    edges.extend(zip(roots, roots[1:]))
    return TreeDecomposition(Graph(len(bags), tuple(edges)), tuple(bags))


def _later_neighbours(s: int, v: int, adjmask) -> list:
    q = _frontier_mask(s, v, adjmask)
    return [u for u in range(len(adjmask)) if (q >> u) & 1]


# ---------------------------------------------------------------------------
# extension graph


def extension_graph(q: ConjunctiveQuery) -> Graph:
    """``H`` plus an edge between free variables sharing an adjacent ``Y``-component."""
    h = q.H
    xs = set(q.X)
    extra = set()
    for comp in q.y_components():
        touch = sorted({w for v in comp for w in h.neighbours[v] if w in xs})
        for i, a in enumerate(touch):
            for b in touch[i + 1 :]:
                extra.add((a, b))
    return Graph(h.n, h.edges + tuple(extra), h.labels)


def extension_width(q: ConjunctiveQuery) -> int:
    return treewidth(extension_graph(q))[0]


def contract_graph(q: ConjunctiveQuery) -> Graph:
    """Extension graph induced on ``X`` (vertex ``i`` is ``q.X[i]``)."""
    return extension_graph(q).induced(q.X)


# ---------------------------------------------------------------------------
# l-copies


@dataclass(frozen=True)
class EllCopy:
    """``F_l(H, X)``: free variables shared, every existential component copied ``l`` times.

    Vertex ``i < k`` of ``F`` is ``X[i]``; vertex ``k + (j-1)*|Y| + t`` is the
    ``j``-th copy of ``Y[t]``.
    """

    query: ConjunctiveQuery
    ell: int
    F: Graph
    gamma: tuple
    component_copies: dict

    @property
    def X(self) -> tuple:
        return tuple(range(self.query.k))

    def copy_of(self, y: int, j: int) -> int:
        q = self.query
        return q.k + (j - 1) * len(q.Y) + q.Y.index(y)


def ell_copy(q: ConjunctiveQuery, ell: int) -> EllCopy:
    if ell < 1:
        raise ValueError("ell must be positive")
    h = q.H
    X, Y = q.X, q.Y
    k, ny = len(X), len(Y)
    index = {x: i for i, x in enumerate(X)}

    def at(y, j):
        return k + (j - 1) * ny + Y.index(y)

    xs = set(X)
    edges = []
    for u, v in h.edges:
        if u in xs and v in xs:
            edges.append((index[u], index[v]))
        elif u in xs or v in xs:
            x, y = (u, v) if u in xs else (v, u)
            edges.extend((index[x], at(y, j)) for j in range(1, ell + 1))
        else:
            edges.extend((at(u, j), at(v, j)) for j in range(1, ell + 1))
    labels = [q.name(x) for x in X]
    gamma = list(X)
    for j in range(1, ell + 1):
        for y in Y:
            labels.append(f"({q.name(y)},{j})")
            gamma.append(y)
    copies = {}
    for i, comp in enumerate(q.y_components()):
        for j in range(1, ell + 1):
            copies[(i, j)] = tuple(at(y, j) for y in comp)
    F = Graph(k + ell * ny, tuple(edges), labels)
    return EllCopy(q, ell, F, tuple(gamma), copies)


def semantic_extension_width(q: ConjunctiveQuery) -> int:
    require_connected(q)
    if q.k == 0:
        raise OutOfScope("queries without free variables are out of scope")
    return extension_width(minimize(q))


def choose_witness_ell(q: ConjunctiveQuery) -> int:
    """Smallest odd ``l`` with ``tw(F_l) = ew(q)``."""
    require_connected(q)
    ew = extension_width(q)
    for ell in range(1, q.H.n + 4, 2):
        if treewidth(ell_copy(q, ell).F)[0] == ew:
            return ell
    raise WldimError("no odd ell up to |V(H)|+3 reaches the extension width")


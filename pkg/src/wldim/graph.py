"""Graphs, homomorphisms, isomorphism search and small constructions.

Vertices are the integers ``0..n-1``.  Edges are stored as sorted pairs
``(u, v)`` with ``u < v`` in lexicographic order, so two ``Graph`` values with
the same edge set compare equal.  Optional string labels record provenance
(CFI subsets, clone indices) and never take part in comparisons.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .config import get_limits
from .errors import BudgetExceeded, NotAHomomorphism, ParseError


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple = ()
    labels: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative vertex count")
        canon = set()
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {{{u},{v}}} out of range for n={self.n}")
            canon.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != self.n:
                raise ValueError("label count does not match vertex count")
            object.__setattr__(self, "labels", labels)

    # -- views -------------------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def neighbours(self) -> tuple:
        nb = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return tuple(tuple(sorted(x)) for x in nb)

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.bool_)
        for u, v in self.edges:
            a[u, v] = a[v, u] = True
        a.setflags(write=False)
        return a

    @cached_property
    def csr(self):
        deg = np.array([len(x) for x in self.neighbours], dtype=np.int64)
        ptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(deg, out=ptr[1:])
        idx = np.fromiter((w for x in self.neighbours for w in x), dtype=np.int64, count=int(ptr[-1]))
        return ptr, idx

    @cached_property
    def adjmask(self) -> tuple:
        return tuple(sum(1 << w for w in nb) for nb in self.neighbours)

    def degree(self, v: int) -> int:
        return len(self.neighbours[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u, v]) if self.n else False

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    # -- structure ---------------------------------------------------------

    def components(self) -> list:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [s], [s]
            while stack:
                u = stack.pop()
                for w in self.neighbours[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        stack.append(w)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph; the i-th listed vertex becomes vertex i."""
        pos = {v: i for i, v in enumerate(vertices)}
        edges = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        labels = None if self.labels is None else [self.labels[v] for v in vertices]
        return Graph(len(pos), tuple(edges), labels)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        edges = [(perm[u], perm[v]) for u, v in self.edges]
        labels = None
        if self.labels is not None:
            labels = [None] * self.n
            for v in range(self.n):
                labels[perm[v]] = self.labels[v]
        return Graph(self.n, tuple(edges), labels)

    def to_text(self) -> str:
        lines = [f"p {self.n}"] + [f"e {u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    def __str__(self):
        return f"Graph(n={self.n}, m={self.m})"


_TOKEN = re.compile(r"^-?\d+$")


def parse_graph(text: str) -> Graph:
    """Parse the ``p <n>`` / ``e <u> <v>`` format (``#`` starts a comment line)."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if any(not _TOKEN.match(a) for a in args):
            raise ParseError(f"expected integers in {line!r}", lineno)
        if kind == "p":
            if n is not None:
                raise ParseError("duplicate 'p' line", lineno)
            if len(args) != 1 or int(args[0]) < 0:
                raise ParseError("expected 'p <n>' with n >= 0", lineno)
            n = int(args[0])
        elif kind == "e":
            if n is None:
                raise ParseError("edge before 'p' line", lineno)
            if len(args) != 2:
                raise ParseError("expected 'e <u> <v>'", lineno)
            u, v = int(args[0]), int(args[1])
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"vertex index out of range in {line!r}", lineno)
            edges.append((u, v))
        else:
            raise ParseError(f"unknown line type {kind!r}", lineno)
    if n is None:
        raise ParseError("missing 'p <n>' line")
    return Graph(n, tuple(edges))


# ---------------------------------------------------------------------------
# standard graphs


def empty_graph(n: int) -> Graph:
    return Graph(n, ())


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def star_graph(k: int) -> Graph:
    """Centre ``k`` joined to leaves ``0..k-1``."""
    return Graph(k + 1, tuple((i, k) for i in range(k)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def disjoint_union(*graphs: Graph) -> Graph:
    edges, off = [], 0
    for g in graphs:
        edges.extend((u + off, v + off) for u, v in g.edges)
        off += g.n
    return Graph(off, tuple(edges))


def tensor(g1: Graph, g2: Graph) -> Graph:
    """Categorical product; vertex ``(a, b)`` has index ``a * g2.n + b``."""
    n2 = g2.n
    edges = []
    for a, a2 in g1.edges:
        for b, b2 in g2.edges:
            edges.append((a * n2 + b, a2 * n2 + b2))
            edges.append((a * n2 + b2, a2 * n2 + b))
    labels = [f"({a},{b})" for a in range(g1.n) for b in range(n2)]
    return Graph(g1.n * n2, tuple(edges), labels)


def complement(g: Graph) -> Graph:
    a = g.adjacency
    return Graph(g.n, tuple((i, j) for i in range(g.n) for j in range(i + 1, g.n) if not a[i, j]))


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class Homomorphism:
    source: Graph
    target: Graph
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(x) for x in self.map))
        if not is_homomorphism(self.source, self.target, self.map):
            raise NotAHomomorphism("map does not preserve edges")

    def __call__(self, v: int) -> int:
        return self.map[v]


def is_homomorphism(h: Graph, g: Graph, mapping: Sequence[int]) -> bool:
    if len(mapping) != h.n:
        return False
    if any(not (0 <= int(x) < g.n) for x in mapping):
        return False
    a = g.adjacency
    return all(a[mapping[u], mapping[v]] for u, v in h.edges)


@dataclass(frozen=True)
class ColouredGraph:
    """A graph ``graph`` with a homomorphism ``colour`` into ``pattern``.

    ``rho`` optionally maps every vertex to the vertex it was cloned from
    (identity when absent).
    """

    graph: Graph
    pattern: Graph
    colour: tuple
    rho: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "colour", tuple(int(x) for x in self.colour))
        if not is_homomorphism(self.graph, self.pattern, self.colour):
            raise NotAHomomorphism("colouring is not a homomorphism into the pattern")

    @property
    def colouring(self) -> Homomorphism:
        return Homomorphism(self.graph, self.pattern, self.colour)

    def colour_class(self, p: int) -> list:
        return [v for v, c in enumerate(self.colour) if c == p]


def search_order(h: Graph):
    """BFS order from vertex 0, restarting at the lowest unvisited vertex.

    Returns ``(order, back_ptr, back_idx)`` where ``back_idx`` lists, for each
    level, the earlier levels holding neighbours (BFS parent first).
    """
    n = h.n
    seen = [False] * n
    order = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        queue = [s]
        i = 0
        while i < len(queue):
            u = queue[i]
            i += 1
            order.append(u)
            for w in h.neighbours[u]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return _levels(h, order)


def _levels(h: Graph, order: Sequence[int]):
    pos = {v: i for i, v in enumerate(order)}
    back_ptr = [0]
    back_idx = []
    for i, v in enumerate(order):
        back_idx.extend(sorted(pos[w] for w in h.neighbours[v] if pos[w] < i))
        back_ptr.append(len(back_idx))
    return (
        np.asarray(order, dtype=np.int64),
        np.asarray(back_ptr, dtype=np.int64),
        np.asarray(back_idx, dtype=np.int64),
    )


def full_domain(h: Graph, g: Graph) -> np.ndarray:
    return np.ones((h.n, g.n), dtype=np.bool_)


def _check(count, nodes, what="homomorphism count"):
    if count < 0:
        raise BudgetExceeded(f"{what}: more than {get_limits().max_assignments} partial assignments")
    return int(count)


def count_hom(h: Graph, g: Graph, domain: np.ndarray | None = None) -> int:
    """|Hom(h, g)|, optionally restricting vertex ``v`` to ``{x : domain[v, x]}``."""
    if h.n == 0:
        return 1
    if g.n == 0:
        return 0
    if domain is None:
        domain = full_domain(h, g)
    order, bp, bi = search_order(h)
    ptr, idx = g.csr
    count, nodes = kernels.hom_count(order, bp, bi, g.adjacency, ptr, idx, domain, get_limits().max_assignments)
    return _check(count, nodes)


def tau_domain(h: Graph, cg: ColouredGraph, tau: Sequence[int]) -> np.ndarray:
    colour = np.asarray(cg.colour, dtype=np.int64)
    tau = np.asarray(tau, dtype=np.int64)
    if h.n == 0:
        return np.zeros((0, cg.graph.n), dtype=np.bool_)
    return colour[None, :] == tau[:, None]


def count_hom_tau(h: Graph, cg: ColouredGraph, tau: Sequence[int]) -> int:
    """|{f in Hom(h, G) : c o f = tau}| for a homomorphism ``tau: h -> pattern``."""
    if not is_homomorphism(h, cg.pattern, tau):
        raise NotAHomomorphism("tau is not a homomorphism into the pattern")
    return count_hom(h, cg.graph, tau_domain(h, cg, tau))


def hom_tau_histogram(h: Graph, cg: ColouredGraph) -> dict:
    """All non-zero ``|Hom_tau|`` at once, keyed by the tuple ``tau``."""
    nf = cg.pattern.n
    m = h.n
    g = cg.graph
    if m == 0:
        return {(): 1}
    if nf**m > 50_000_000:
        raise BudgetExceeded("too many colour patterns for a histogram")
    weight = np.array([nf ** (m - 1 - v) for v in range(m)], dtype=np.int64)
    hist = np.zeros(nf**m, dtype=np.int64)
    order, bp, bi = search_order(h)
    ptr, idx = g.csr
    count, nodes = kernels.hom_colour_histogram(
        order, bp, bi, g.adjacency, ptr, idx, full_domain(h, g),
        np.asarray(cg.colour, dtype=np.int64), weight, hist, get_limits().max_assignments,
    )
    _check(count, nodes)
    out = {}
    for code in np.nonzero(hist)[0]:
        code = int(code)
        tau = []
        for v in range(m):
            tau.append(code // int(weight[v]) % nf)
        out[tuple(tau)] = int(hist[code])
    return out


def iter_homs(
    h: Graph,
    g: Graph,
    domain: np.ndarray | None = None,
    injective_on: Iterable[int] = (),
) -> Iterator[tuple]:
    """Yield every homomorphism as a tuple, in the deterministic search order.

    Vertices in ``injective_on`` must receive pairwise distinct images.
    """
    if h.n == 0:
        yield ()
        return
    order, bp, bi = (x.tolist() for x in search_order(h))
    inj = set(injective_on)
    nb = g.neighbours
    a = g.adjacency
    budget = get_limits().max_assignments
    m = h.n
    assign = [0] * m
    taken = set()
    nodes = 0

    def rec(level):
        nonlocal nodes
        v = order[level]
        backs = bi[bp[level] : bp[level + 1]]
        pool = nb[assign[backs[0]]] if backs else range(g.n)
        for x in pool:
            if domain is not None and not domain[v, x]:
                continue
            if any(not a[assign[b], x] for b in backs[1:]):
                continue
            if v in inj and x in taken:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"homomorphism enumeration: more than {budget} partial assignments")
            assign[level] = x
            if level == m - 1:
                out = [0] * m
                for i, u in enumerate(order):
                    out[u] = assign[i]
                yield tuple(out)
                continue
            if v in inj:
                taken.add(x)
            yield from rec(level + 1)
            if v in inj:
                taken.discard(x)

    yield from rec(0)

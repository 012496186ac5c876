"""Conjunctive queries over a single binary relation.

A query is a graph ``H`` together with an ordered tuple ``X`` of free
variables.  Answers in ``G`` are maps ``X -> V(G)`` that extend to a
homomorphism ``H -> G``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .config import get_limits
from .errors import BudgetExceeded, OutOfScope, ParseError
from .graph import Graph, _levels, iter_homs
from .iso import automorphisms, find_isomorphism


@dataclass(frozen=True)
class ConjunctiveQuery:
    H: Graph
    X: tuple
    names: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        X = tuple(int(x) for x in self.X)
        if len(set(X)) != len(X):
            raise ValueError("free variables must be distinct")
        if any(not (0 <= x < self.H.n) for x in X):
            raise ValueError("free variable outside V(H)")
        object.__setattr__(self, "X", X)
        if self.names is not None:
            names = tuple(self.names)
            if len(names) != self.H.n or len(set(names)) != len(names):
                raise ValueError("need one unique name per vertex")
            object.__setattr__(self, "names", names)

    @property
    def Y(self) -> tuple:
        xs = set(self.X)
        return tuple(v for v in range(self.H.n) if v not in xs)

    @property
    def k(self) -> int:
        return len(self.X)

    def name(self, v: int) -> str:
        if self.names is not None:
            return self.names[v]
        pos = {x: i for i, x in enumerate(self.X)}
        if v in pos:
            return f"x{pos[v] + 1}"
        return f"y{self.Y.index(v) + 1}"

    def y_components(self) -> list:
        """Connected components of ``H[Y]`` as sorted vertex lists of ``H``."""
        ys = self.Y
        sub = self.H.induced(ys)
        return [[ys[i] for i in comp] for comp in sub.components()]

    def to_dsl(self, head: str = "q") -> str:
        hd = ",".join(self.name(x) for x in self.X)
        atoms = ", ".join(f"E({self.name(u)},{self.name(v)})" for u, v in self.H.edges)
        return f"{head}({hd}) :- {atoms}"

    def canonical(self) -> "ConjunctiveQuery":
        """Relabel so that ``X = (0..k-1)`` and ``Y`` follows in index order."""
        order = list(self.X) + list(self.Y)
        perm = [0] * self.H.n
        for i, v in enumerate(order):
            perm[v] = i
        names = None
        if self.names is not None:
            names = tuple(self.names[v] for v in order)
        return ConjunctiveQuery(self.H.relabel(perm), tuple(range(self.k)), names)

    def __str__(self):
        return self.to_dsl()


# ---------------------------------------------------------------------------
# DSL

_TOKENS = re.compile(r"\s*(?:(?P<id>[A-Za-z][A-Za-z0-9_]*)|(?P<p>:-|[(),]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r} at offset {pos}")
        tok = m.group("id") or m.group("p")
        out.append((tok, m.start(m.lastindex)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_query(text: str) -> ConjunctiveQuery:
    """Parse ``q(x1,x2) :- E(x1,y), E(x2,y)``.

    Head variables become ``X = (0, .., k-1)`` in head order; body-only
    variables are numbered after them by first appearance.
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    toks = _tokenize(" ".join(lines))
    i = 0

    def expect(what=None, ident=False):
        nonlocal i
        if i >= len(toks):
            raise ParseError(f"unexpected end of query, expected {what or 'identifier'}")
        tok, off = toks[i]
        is_id = tok[0].isalpha()
        if (ident and not is_id) or (what is not None and tok != what):
            raise ParseError(f"expected {what or 'identifier'} at offset {off}, got {tok!r}")
        i += 1
        return tok

    expect(ident=True)
    expect("(")
    head = [expect(ident=True)]
    while i < len(toks) and toks[i][0] == ",":
        i += 1
        head.append(expect(ident=True))
    expect(")")
    expect(":-")
    atoms = []
    while True:
        rel = expect(ident=True)
        if rel != "E":
            raise ParseError(f"unknown relation {rel!r}; only E is supported")
        expect("(")
        a = expect(ident=True)
        expect(",")
        b = expect(ident=True)
        expect(")")
        if a == b:
            raise ParseError(f"self-loop atom E({a},{a})")
        atoms.append((a, b))
        if i < len(toks) and toks[i][0] == ",":
            i += 1
            continue
        break
    if i != len(toks):
        raise ParseError(f"trailing input at offset {toks[i][1]}")
    if len(set(head)) != len(head):
        raise ParseError("repeated head variable")
    index = {v: j for j, v in enumerate(head)}
    for a, b in atoms:
        for v in (a, b):
            if v not in index:
                index[v] = len(index)
    used = {v for atom in atoms for v in atom}
    for v in head:
        if v not in used:
            raise ParseError(f"isolated variable {v!r}")
    names = tuple(sorted(index, key=index.get))
    h = Graph(len(index), tuple((index[a], index[b]) for a, b in atoms))
    return ConjunctiveQuery(h, tuple(range(len(head))), names)


def is_connected(q: ConjunctiveQuery) -> bool:
    return q.H.is_connected()


def require_connected(q: ConjunctiveQuery) -> None:
    if not q.H.is_connected():
        raise OutOfScope("disconnected query out of scope")


# ---------------------------------------------------------------------------
# answers


def answer_plan(q: ConjunctiveQuery):
    """Search levels for the answers kernel.

    Free variables come first (BFS inside ``H[X]``), then every component of
    ``H[Y]`` as its own block, started next to ``X`` where possible.
    """
    h = q.H
    xs = list(q.X)
    xset = set(xs)
    order = []
    seen = set()
    for s in xs:
        if s in seen:
            continue
        seen.add(s)
        queue = [s]
        while queue:
            u = queue.pop(0)
            order.append(u)
            for w in h.neighbours[u]:
                if w in xset and w not in seen:
                    seen.add(w)
                    queue.append(w)
    comp_ptr = [len(order)]
    for comp in q.y_components():
        cset = set(comp)
        start = next((v for v in comp if any(w in xset for w in h.neighbours[v])), comp[0])
        queue, got = [start], {start}
        while queue:
            u = queue.pop(0)
            order.append(u)
            for w in h.neighbours[u]:
                if w in cset and w not in got:
                    got.add(w)
                    queue.append(w)
        comp_ptr.append(len(order))
    o, bp, bi = _levels(h, order)
    return o, bp, bi, np.asarray(comp_ptr, dtype=np.int64)


def _run_answers(q: ConjunctiveQuery, g: Graph, domain, cap: int):
    k = q.k
    if g.n == 0:
        return (1 if q.H.n == 0 else 0), np.zeros((0, k), np.int64), None
    o, bp, bi, cp = answer_plan(q)
    if domain is None:
        domain = np.ones((q.H.n, g.n), dtype=np.bool_)
    ptr, idx = g.csr
    out = np.zeros((cap, max(k, 1)), dtype=np.int64)
    count, nodes = kernels.answers(k, cp, o, bp, bi, g.adjacency, ptr, idx, domain, get_limits().max_assignments, out)
    if count < 0:
        raise BudgetExceeded(f"answer count: more than {get_limits().max_assignments} partial assignments")
    return int(count), out, o


def count_answers(q: ConjunctiveQuery, g: Graph, domain: np.ndarray | None = None) -> int:
    """|Ans(q, g)|: assignments of ``X`` that extend to a homomorphism."""
    count, _, _ = _run_answers(q, g, domain, 0)
    return count


def answers(q: ConjunctiveQuery, g: Graph, domain: np.ndarray | None = None) -> list:
    """All answers as tuples indexed like ``q.X``, sorted."""
    count = count_answers(q, g, domain)
    if q.k == 0:
        return [()] * count
    if count == 0:
        return []
    _, out, o = _run_answers(q, g, domain, count)
    pos = {int(v): i for i, v in enumerate(o[: q.k])}
    cols = [pos[x] for x in q.X]
    return sorted(tuple(int(r[c]) for c in cols) for r in out[:count])


# ---------------------------------------------------------------------------
# minimisation


def _folding_endomorphism(q: ConjunctiveQuery):
    """First endomorphism bijective on ``X`` that is not an automorphism."""
    h = q.H
    xs = set(q.X)
    dom = np.ones((h.n, h.n), dtype=np.bool_)
    for x in q.X:
        dom[x, :] = False
        dom[x, list(q.X)] = True
    for f in iter_homs(h, h, dom, injective_on=q.X):
        if len(set(f)) < h.n:
            return f
    return None


def minimize(q: ConjunctiveQuery) -> ConjunctiveQuery:
    """A counting-minimal query counting-equivalent to ``q``.

    Repeatedly replaces ``H`` by the image of an endomorphism that permutes
    ``X`` but is not an automorphism; stops once none exists.  The result is
    in canonical form with the order of ``X`` kept.
    """
    require_connected(q)
    cur = q
    while True:
        f = _folding_endomorphism(cur)
        if f is None:
            break
        h = cur.H
        image = sorted(set(f))
        pos = {v: i for i, v in enumerate(image)}
        edges = {tuple(sorted((pos[f[u]], pos[f[v]]))) for u, v in h.edges}
        # f permutes X, so every free variable survives with its own name
        names = None if cur.names is None else tuple(cur.names[v] for v in image)
        cur = ConjunctiveQuery(Graph(len(image), tuple(edges)), tuple(pos[x] for x in cur.X), names)
    return cur.canonical()


def _free_colours(q: ConjunctiveQuery) -> list:
    xs = set(q.X)
    return [1 if v in xs else 0 for v in range(q.H.n)]


def find_query_isomorphism(q1: ConjunctiveQuery, q2: ConjunctiveQuery):
    """Isomorphism ``H1 -> H2`` mapping ``X1`` onto ``X2`` (as sets), or None."""
    if q1.k != q2.k:
        return None
    return find_isomorphism(q1.H, q2.H, _free_colours(q1), _free_colours(q2))


def is_query_isomorphic(q1: ConjunctiveQuery, q2: ConjunctiveQuery) -> bool:
    return find_query_isomorphism(q1, q2) is not None


def is_counting_equivalent(q1: ConjunctiveQuery, q2: ConjunctiveQuery) -> bool:
    if q1.k != q2.k:
        return False
    return is_query_isomorphic(minimize(q1), minimize(q2))


def is_counting_minimal(q: ConjunctiveQuery) -> bool:
    return _folding_endomorphism(q) is None


# ---------------------------------------------------------------------------
# partial automorphisms


@dataclass(frozen=True)
class PartialAutomorphismSet:
    """Restrictions to ``X`` of automorphisms of ``H``.

    Each map is a tuple ``t`` with ``t[i] = j`` meaning ``X[i] -> X[j]``.
    """

    query: ConjunctiveQuery
    maps: frozenset

    def __contains__(self, t) -> bool:
        return tuple(t) in self.maps

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(sorted(self.maps))

    def as_vertex_maps(self) -> list:
        """The maps as dicts ``x -> x'`` on vertices of ``H``."""
        X = self.query.X
        return [{X[i]: X[j] for i, j in enumerate(t)} for t in sorted(self.maps)]


def partial_automorphisms(q: ConjunctiveQuery) -> PartialAutomorphismSet:
    pos = {x: i for i, x in enumerate(q.X)}
    maps = set()
    for a in automorphisms(q.H, _free_colours(q)):
        maps.add(tuple(pos[a[x]] for x in q.X))
    return PartialAutomorphismSet(q, frozenset(maps))


def from_edges(n: int, edges: Sequence, X: Sequence[int], names=None) -> ConjunctiveQuery:
    return ConjunctiveQuery(Graph(n, tuple(edges)), tuple(X), names)

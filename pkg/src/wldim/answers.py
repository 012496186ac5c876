"""Colour-restricted answer counts, extendable assignments and interpolation.

Throughout, ``ec`` is an :class:`~wldim.width.EllCopy` and ``chi`` a CFI
graph over ``ec.F``; the H-colouring of ``chi`` is ``gamma o pi_1``.  Free
variable ``x_p`` of the query is vertex ``p`` of ``F``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cfi import CfiGraph, cfi
from .errors import NoExtension, OutOfScope, WldimError
from .graph import ColouredGraph, Graph, Homomorphism, count_hom, is_homomorphism
from .query import ConjunctiveQuery, answers, count_answers
from .width import EllCopy, ell_copy


def _h_colour(cg: ColouredGraph, gamma: Sequence[int] | None) -> np.ndarray:
    col = np.asarray(cg.colour, dtype=np.int64)
    if gamma is not None:
        col = np.asarray(gamma, dtype=np.int64)[col]
    return col


def _check_alignment(q: ConjunctiveQuery, cg: ColouredGraph, gamma):
    if gamma is None:
        if cg.pattern.n != q.H.n:
            raise WldimError("pattern is not aligned with V(H); pass gamma")
    else:
        if len(gamma) != cg.pattern.n or any(not (0 <= g < q.H.n) for g in gamma):
            raise WldimError("gamma must map pattern vertices into V(H)")


def count_answers_tau(q: ConjunctiveQuery, cg: ColouredGraph, tau: Sequence[int], gamma=None) -> int:
    """Answers ``a`` with ``colour(a(X[i])) = tau[i]``; colours are taken
    through ``gamma`` when the pattern is an l-copy."""
    _check_alignment(q, cg, gamma)
    tau = tuple(int(t) for t in tau)
    if len(tau) != q.k or any(not (0 <= t < q.H.n) for t in tau):
        raise WldimError("tau must map every free variable to a vertex of H")
    col = _h_colour(cg, gamma)
    dom = np.ones((q.H.n, cg.graph.n), dtype=np.bool_)
    for x, t in zip(q.X, tau):
        dom[x] = col == t
    return count_answers(q, cg.graph, dom)


def _cp_domain(q: ConjunctiveQuery, cg: ColouredGraph, gamma) -> np.ndarray:
    col = _h_colour(cg, gamma)
    return col[None, :] == np.arange(q.H.n)[:, None]


def count_cp_answers(q: ConjunctiveQuery, cg: ColouredGraph, gamma=None) -> int:
    """Answers extendable by a homomorphism with ``colour(h(v)) = v`` everywhere."""
    _check_alignment(q, cg, gamma)
    return count_answers(q, cg.graph, _cp_domain(q, cg, gamma))


def cp_answer_set(q: ConjunctiveQuery, cg: ColouredGraph, gamma=None) -> set:
    _check_alignment(q, cg, gamma)
    return set(answers(q, cg.graph, _cp_domain(q, cg, gamma)))


# ---------------------------------------------------------------------------
# extendable assignments


@dataclass(frozen=True)
class ExtendableAssignment:
    phi: tuple  # vertex of chi(F, W) per free variable
    sets: tuple  # S_p as frozensets of F-vertices
    e1: bool
    e2: bool
    witness_copies: dict = field(default_factory=dict, compare=False)

    @property
    def extendable(self) -> bool:
        return self.e1 and self.e2


def first_free_adjacent_to_y(q: ConjunctiveQuery) -> int:
    """Position in ``X`` of the lowest-index free variable with an existential neighbour."""
    ys = set(q.Y)
    best = None
    for i, x in enumerate(q.X):
        if any(w in ys for w in q.H.neighbours[x]):
            if best is None or x < q.X[best]:
                best = i
    if best is None:
        raise OutOfScope("no free variable is adjacent to an existential variable")
    return best


def _vertex_index(chi: CfiGraph) -> dict:
    return {s: i for i, s in enumerate(chi.subsets)}


def _check_extendable_scope(q: ConjunctiveQuery, ec: EllCopy):
    if ec.ell % 2 == 0:
        raise WldimError("ell must be odd")
    if not q.H.is_connected():
        raise OutOfScope("disconnected query out of scope")
    first_free_adjacent_to_y(q)


def classify(q: ConjunctiveQuery, ec: EllCopy, sets: Sequence[frozenset]) -> tuple:
    """``(e1, e2, witness_copies)`` for the subsets ``S_1..S_k``."""
    k = q.k
    F = ec.F
    e1 = True
    for a in range(k):
        for b in range(a + 1, k):
            if F.has_edge(a, b) and ((a in sets[b]) != (b in sets[a])):
                e1 = False
    ncomp = len({i for i, _ in ec.component_copies})
    witnesses = {}
    for i in range(ncomp):
        for j in range(1, ec.ell + 1):
            block = set(ec.component_copies[(i, j)])
            if sum(len(s & block) for s in sets) % 2 == 0:
                witnesses[i] = j
                break
    e2 = len(witnesses) == ncomp
    return e1, e2, witnesses


def enumerate_extendable(
    q: ConjunctiveQuery, ec: EllCopy, W: Iterable[int] = (), chi: CfiGraph | None = None, only_extendable=True
) -> list:
    """Assignments ``x_p -> (x_p, S_p)`` into ``chi(F, W)``, ``W`` given as positions in ``X``.

    Subsets are generated with the parity forced by ``W``; (E1) is checked as
    soon as both endpoints are fixed and (E2) at the end.
    """
    _check_extendable_scope(q, ec)
    W = frozenset(W)
    if not W <= set(range(q.k)):
        raise WldimError("W must be a set of free-variable positions")
    if chi is None:
        chi = cfi(ec.F, W)
    index = _vertex_index(chi)
    F = ec.F
    k = q.k
    options = []
    for p in range(k):
        nb = F.neighbours[p]
        want = 1 if p in W else 0
        opts = []
        for mask in range(1 << len(nb)):
            if bin(mask).count("1") % 2 == want:
                opts.append(frozenset(nb[b] for b in range(len(nb)) if (mask >> b) & 1))
        options.append(opts)
    out = []
    chosen = []

    def rec(p, e1_ok):
        if p == k:
            e1, e2, wit = classify(q, ec, chosen)
            if only_extendable and not (e1 and e2):
                return
            phi = tuple(index[(x, s)] for x, s in enumerate(chosen))
            out.append(ExtendableAssignment(phi, tuple(chosen), e1, e2, wit))
            return
        for s in options[p]:
            ok = e1_ok
            for a in range(p):
                if F.has_edge(a, p) and ((a in s) != (p in chosen[a])):
                    ok = False
                    break
            if only_extendable and not ok:
                continue
            chosen.append(s)
            rec(p + 1, ok)
            chosen.pop()

    rec(0, True)
    return out


# ---------------------------------------------------------------------------
# parity edge assignments


@dataclass(frozen=True)
class ParityAssignment:
    graph: Graph
    target_set: frozenset
    beta: dict  # edge (u, v) with u < v -> 0/1

    def check(self) -> bool:
        g = self.graph
        for v in range(g.n):
            tot = sum(self.beta[tuple(sorted((u, v)))] for u in g.neighbours[v])
            if tot % 2 != (1 if v in self.target_set else 0):
                return False
        return True


def _non_cut_vertex(g: Graph, alive: set) -> tuple:
    """A leaf of a BFS tree of ``g[alive]`` (never a cut vertex) and its parent."""
    root = min(alive)
    parent = {root: None}
    queue = [root]
    order = []
    while queue:
        u = queue.pop(0)
        order.append(u)
        for w in g.neighbours[u]:
            if w in alive and w not in parent:
                parent[w] = u
                queue.append(w)
    children = {u for u in parent.values() if u is not None}
    leaf = max(u for u in order if u not in children)
    return leaf, parent[leaf]


def parity_edge_assignment(g: Graph, S: Iterable[int]) -> ParityAssignment:
    """``beta: E -> {0,1}`` whose edge sum at ``v`` is odd exactly for ``v in S``.

    Peels off non-cut vertices one at a time; a vertex in ``S`` routes one
    unit to its tree parent, which toggles the parent's membership.
    """
    S = frozenset(int(s) for s in S)
    if len(S) % 2:
        raise WldimError("target set must have even size")
    if not g.is_connected():
        raise WldimError("graph must be connected")
    beta = {e: 0 for e in g.edges}
    alive = set(range(g.n))
    todo = set(S)
    while len(alive) > 1:
        v, u = _non_cut_vertex(g, alive)
        if v in todo:
            beta[tuple(sorted((u, v)))] = 1
            todo.discard(v)
            todo ^= {u}
        alive.discard(v)
    result = ParityAssignment(g, S, beta)
    if todo or not result.check():  # pragma: no cover - guarded by the invariant
        raise WldimError("parity assignment failed verification")
    return result


def extend_assignment(
    phi: ExtendableAssignment, q: ConjunctiveQuery, ec: EllCopy, W: Iterable[int] = (), chi: CfiGraph | None = None
) -> Homomorphism:
    """A colour-prescribed homomorphism ``H -> chi(F, W)`` restricting to ``phi``."""
    _check_extendable_scope(q, ec)
    W = frozenset(W)
    if chi is None:
        chi = cfi(ec.F, W)
    e1, e2, wit = classify(q, ec, phi.sets)
    if not (e1 and e2):
        raise NoExtension("assignment is not extendable, so no extension exists")
    index = _vertex_index(chi)
    h = [0] * q.H.n
    for p, x in enumerate(q.X):
        h[x] = index[(p, frozenset(phi.sets[p]))]
    for i, comp in enumerate(q.y_components()):
        j = wit[i]
        t_x = {y: frozenset(p for p in range(q.k) if ec.copy_of(y, j) in phi.sets[p]) for y in comp}
        omega = [pos for pos, y in enumerate(comp) if len(t_x[y]) % 2]
        sub = q.H.induced(comp)
        beta = parity_edge_assignment(sub, omega).beta
        for pos, y in enumerate(comp):
            t_y = {ec.copy_of(comp[o], j) for o in sub.neighbours[pos] if beta[tuple(sorted((o, pos)))]}
            T = frozenset(t_x[y]) | frozenset(t_y)
            h[y] = index[(ec.copy_of(y, j), T)]
    col = _h_colour(chi.coloured, ec.gamma)
    if not is_homomorphism(q.H, chi.result, h) or any(col[h[v]] != v for v in range(q.H.n)):
        raise WldimError("constructed extension failed validation")  # pragma: no cover
    return Homomorphism(q.H, chi.result, tuple(h))


# ---------------------------------------------------------------------------
# interpolation


def solve_vandermonde(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> list:
    """Exact Gaussian elimination over the rationals."""
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise WldimError("singular system")
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def ans_via_interpolation(q: ConjunctiveQuery, g: Graph, max_nhat: int = 27) -> int:
    """|Ans(q, g)| recovered from ``|Hom(F_l, g)|`` for ``l = 1..n^|Y|``.

    ``|Hom(F_l, g)| = sum_i i^l b_i`` where ``b_i`` collects answers whose set
    of extensions has size ``i``; the answer count is ``sum_i b_i``.
    """
    ny = len(q.Y)
    if ny == 0:
        return count_hom(q.H, g)
    nhat = g.n**ny
    if nhat > max_nhat:
        raise OutOfScope(f"interpolation needs {nhat} > {max_nhat} hom counts")
    if nhat == 0:
        return 0
    hom = [count_hom(ell_copy(q, ell).F, g) for ell in range(1, nhat + 1)]
    rows = [[i**ell for i in range(1, nhat + 1)] for ell in range(1, nhat + 1)]
    b = solve_vandermonde(rows, hom)
    if any(x.denominator != 1 or x < 0 for x in b):
        raise WldimError("interpolation produced a non-integral bucket")  # pragma: no cover
    return int(sum(b))


def bijections(k: int):
    return itertools.permutations(range(k))

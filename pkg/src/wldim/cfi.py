"""CFI graphs and colour-block cloning."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import get_limits
from .errors import OutOfScope, WldimError
from .graph import ColouredGraph, Graph


@dataclass(frozen=True)
class CfiGraph:
    base: Graph
    odd_set: frozenset
    result: Graph
    subsets: tuple  # (w, frozenset S) per result vertex

    @property
    def coloured(self) -> ColouredGraph:
        return ColouredGraph(self.result, self.base, tuple(w for w, _ in self.subsets))

    @property
    def colour(self) -> tuple:
        return tuple(w for w, _ in self.subsets)


def _fmt_set(base: Graph, s) -> str:
    return "{" + ",".join(base.label(u) for u in sorted(s)) + "}"


def cfi(g: Graph, W: Iterable[int] = ()) -> CfiGraph:
    """``chi(G, W)``: vertices ``(w, S)`` with ``S`` a subset of ``N(w)`` and
    ``|S|`` odd exactly when ``w`` is in ``W``; ``(w, S) ~ (w', S')`` iff
    ``ww'`` is an edge and ``w' in S <=> w in S'``."""
    W = frozenset(int(w) for w in W)
    if any(not (0 <= w < g.n) for w in W):
        raise ValueError("W must be a subset of V(G)")
    cap = get_limits().max_cfi_degree
    masks = []  # per base vertex: array of local bitmasks, sorted
    start = []
    total = 0
    for w in range(g.n):
        d = g.degree(w)
        if d > cap:
            raise OutOfScope(f"vertex {w} has degree {d} > CFI degree cap {cap}")
        allm = np.arange(1 << d, dtype=np.int64)
        pc = np.zeros_like(allm)
        for b in range(d):
            pc += (allm >> b) & 1
        keep = allm[(pc & 1) == (1 if w in W else 0)]
        masks.append(keep)
        start.append(total)
        total += len(keep)
    subsets = []
    labels = []
    for w in range(g.n):
        nb = g.neighbours[w]
        for mk in masks[w]:
            s = frozenset(nb[b] for b in range(len(nb)) if (int(mk) >> b) & 1)
            subsets.append((w, s))
            labels.append(f"({g.label(w)},{_fmt_set(g, s)})")
    edges = []
    for w, w2 in g.edges:
        bit_in_w = (masks[w] >> g.neighbours[w].index(w2)) & 1
        bit_in_w2 = (masks[w2] >> g.neighbours[w2].index(w)) & 1
        ii, jj = np.nonzero(bit_in_w[:, None] == bit_in_w2[None, :])
        edges.extend(zip((ii + start[w]).tolist(), (jj + start[w2]).tolist()))
    return CfiGraph(g, W, Graph(total, tuple(edges), labels), tuple(subsets))


def expected_cfi_size(g: Graph) -> int:
    return sum(2 ** (g.degree(w) - 1) for w in range(g.n))


def cfi_iso_parity(g: Graph, w1: Iterable[int], w2: Iterable[int]) -> bool:
    """Predicted verdict for ``chi(G, W1) ~= chi(G, W2)`` on connected ``G``."""
    return len(set(w1)) % 2 == len(set(w2)) % 2


@dataclass(frozen=True)
class CloneSpec:
    block_vertices: tuple
    multiplicities: tuple

    def __post_init__(self):
        bv = tuple(int(v) for v in self.block_vertices)
        z = tuple(int(x) for x in self.multiplicities)
        if len(set(bv)) != len(bv):
            raise WldimError("block vertices must be distinct")
        if len(bv) != len(z):
            raise WldimError("need one multiplicity per block vertex")
        if any(x < 1 for x in z):
            raise WldimError("multiplicities must be positive")
        object.__setattr__(self, "block_vertices", bv)
        object.__setattr__(self, "multiplicities", z)


def clone_blocks(cg: ColouredGraph, spec: CloneSpec) -> ColouredGraph:
    """Add ``z_i - 1`` twins of every vertex coloured ``v_i``.

    Original vertices keep their indices; clones are appended block by block.
    A clone is adjacent to exactly the vertices its original is adjacent to
    (and to their clones).  ``rho`` maps every vertex to its original.
    """
    g = cg.graph
    if any(not (0 <= v < cg.pattern.n) for v in spec.block_vertices):
        raise WldimError("block vertex not in pattern")
    rho = list(range(g.n))
    labels = [g.label(v) for v in range(g.n)]
    for v, z in zip(spec.block_vertices, spec.multiplicities):
        block = cg.colour_class(v)
        for j in range(2, z + 1):
            for u in block:
                rho.append(u)
                labels.append(f"{g.label(u)}#{j}")
    copies = [[] for _ in range(g.n)]
    for x, r in enumerate(rho):
        copies[r].append(x)
    edges = []
    for u, v in g.edges:
        for a in copies[u]:
            for b in copies[v]:
                edges.append((a, b))
    new = Graph(len(rho), tuple(edges), labels)
    colour = tuple(cg.colour[r] for r in rho)
    base_rho = cg.rho
    if base_rho is not None:
        rho = [base_rho[r] for r in rho]
    return ColouredGraph(new, cg.pattern, colour, tuple(rho))


def clone_size(cg: ColouredGraph, spec: CloneSpec) -> int:
    extra = sum((z - 1) * len(cg.colour_class(v)) for v, z in zip(spec.block_vertices, spec.multiplicities))
    return cg.graph.n + extra


def labels_sidecar(g: Graph) -> dict:
    return {str(v): g.label(v) for v in range(g.n)}

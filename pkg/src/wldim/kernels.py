"""Hot inner loops.

Everything here works on flat integer arrays so it can be compiled by numba.
The backtracking kernels share one calling convention:

* ``order[l]``      pattern vertex placed at level ``l``
* ``back_ptr``/``back_idx``  CSR lists of *earlier levels* adjacent to level ``l``
* ``adj``           boolean adjacency matrix of the target
* ``nbr_ptr``/``nbr_idx``    CSR neighbour lists of the target
* ``domain[v, g]``  whether pattern vertex ``v`` may be mapped to ``g``

A kernel returns ``-1`` as its count once more than ``budget`` partial
assignments have been visited; callers turn that into ``BudgetExceeded``.
"""

import numpy as np

from ._accel import PURE, jit

# ---------------------------------------------------------------------------
# 64-bit hashing used for colour refinement

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_C1 = np.uint64(0xBF58476D1CE4E5B9)
_C2 = np.uint64(0x94D049BB133111EB)
_S2 = np.uint64(2)
_S6 = np.uint64(6)
_S27 = np.uint64(27)
_S30 = np.uint64(30)
_S31 = np.uint64(31)

SEED_CR = np.uint64(0x1F2E3D4C5B6A7988)
SEED_FWL = np.uint64(0x0123456789ABCDEF)
SEED_VEC = np.uint64(0x7A5C3E1F0B9D8F61)


@jit
def _mix(h, v):
    x = h ^ (v + _GOLDEN + (h << _S6) + (h >> _S2))
    x = (x ^ (x >> _S30)) * _C1
    x = (x ^ (x >> _S27)) * _C2
    return x ^ (x >> _S31)


def _mix_np(h, v):
    with np.errstate(over="ignore"):
        x = h ^ (v + _GOLDEN + (h << _S6) + (h >> _S2))
        x = (x ^ (x >> _S30)) * _C1
        x = (x ^ (x >> _S27)) * _C2
        return x ^ (x >> _S31)


@jit
def _cr_round_loop(colours, nbr_ptr, nbr_idx):
    n = colours.shape[0]
    out = np.empty(n, np.uint64)
    buf = np.empty(nbr_idx.shape[0], np.uint64)
    for i in range(nbr_idx.shape[0]):
        buf[i] = colours[nbr_idx[i]]
    for v in range(n):
        lo = nbr_ptr[v]
        hi = nbr_ptr[v + 1]
        buf[lo:hi].sort()
        h = _mix(SEED_CR, colours[v])
        for i in range(lo, hi):
            h = _mix(h, buf[i])
        out[v] = h
    return out


@jit
def _count_distinct(a):
    if a.shape[0] == 0:
        return 0
    b = np.sort(a)
    c = 1
    for i in range(1, b.shape[0]):
        if b[i] != b[i - 1]:
            c += 1
    return c


@jit
def _cr_refine_loop(colours, nbr_ptr, nbr_idx):
    k = _count_distinct(colours)
    rounds = 0
    while True:
        new = _cr_round_loop(colours, nbr_ptr, nbr_idx)
        k2 = _count_distinct(new)
        rounds += 1
        if k2 == k:
            # the last round carries the neighbourhood counts of the stable partition
            return new, rounds
        colours = new
        k = k2


def _cr_round_np(colours, nbr_ptr, nbr_idx):
    n = colours.shape[0]
    deg = np.diff(nbr_ptr)
    width = int(deg.max()) if n else 0
    # padded neighbour-colour matrix, padding pushed to the end by sorting on a validity key
    owner = np.repeat(np.arange(n), deg)
    col = colours[nbr_idx]
    order = np.lexsort((col, owner))
    col = col[order]
    pos = np.arange(col.shape[0]) - np.repeat(nbr_ptr[:-1], deg)
    mat = np.zeros((n, max(width, 1)), np.uint64)
    mat[owner, pos] = col
    h = _mix_np(np.full(n, SEED_CR, np.uint64), colours)
    for j in range(width):
        h = np.where(j < deg, _mix_np(h, mat[:, j]), h)
    return h


@jit
def _fwl_round_loop(colours, n, k):
    total = colours.shape[0]
    out = np.empty(total, np.uint64)
    pw = np.empty(k, np.int64)
    p = 1
    for i in range(k - 1, -1, -1):
        pw[i] = p
        p *= n
    digits = np.empty(k, np.int64)
    row = np.empty(n, np.uint64)
    for t in range(total):
        rem = t
        for i in range(k):
            digits[i] = rem // pw[i]
            rem -= digits[i] * pw[i]
        for w in range(n):
            e = SEED_VEC
            for i in range(k):
                e = _mix(e, colours[t + (w - digits[i]) * pw[i]])
            row[w] = e
        row.sort()
        h = _mix(SEED_FWL, colours[t])
        for w in range(n):
            h = _mix(h, row[w])
        out[t] = h
    return out


def _fwl_round_np(colours, n, k):
    total = colours.shape[0]
    pw = np.array([n ** (k - 1 - i) for i in range(k)], dtype=np.int64)
    t = np.arange(total, dtype=np.int64)
    digits = (t[:, None] // pw[None, :]) % n
    w = np.arange(n, dtype=np.int64)
    e = np.full((total, n), SEED_VEC, np.uint64)
    for i in range(k):
        idx = t[:, None] + (w[None, :] - digits[:, i : i + 1]) * pw[i]
        e = _mix_np(e, colours[idx])
    e.sort(axis=1)
    h = _mix_np(np.full(total, SEED_FWL, np.uint64), colours)
    for j in range(n):
        h = _mix_np(h, e[:, j])
    return h


def _cr_refine_np(colours, nbr_ptr, nbr_idx):
    k = len(np.unique(colours))
    rounds = 0
    while True:
        new = _cr_round_np(colours, nbr_ptr, nbr_idx)
        k2 = len(np.unique(new))
        rounds += 1
        if k2 == k:
            return new, rounds
        colours, k = new, k2


if PURE:
    cr_round = _cr_round_np
    cr_refine = _cr_refine_np
    fwl_round = _fwl_round_np
else:
    cr_round = _cr_round_loop
    cr_refine = _cr_refine_loop
    fwl_round = _fwl_round_loop


def mix_array(h, v):
    """Vectorised hash combine, identical on both backends."""
    return _mix_np(np.asarray(h, np.uint64), np.asarray(v, np.uint64))


# ---------------------------------------------------------------------------
# backtracking


@jit
def _next_cand(level, start, order, back_ptr, back_idx, assign, adj, nbr_ptr, nbr_idx, domain):
    v = order[level]
    b0 = back_ptr[level]
    b1 = back_ptr[level + 1]
    if b1 > b0:
        anchor = assign[back_idx[b0]]
        lo = nbr_ptr[anchor]
        hi = nbr_ptr[anchor + 1]
        i = start
        while lo + i < hi:
            g = nbr_idx[lo + i]
            if domain[v, g]:
                ok = True
                for t in range(b0 + 1, b1):
                    if not adj[assign[back_idx[t]], g]:
                        ok = False
                        break
                if ok:
                    return i, g
            i += 1
        return -1, -1
    n = adj.shape[0]
    i = start
    while i < n:
        if domain[v, i]:
            return i, i
        i += 1
    return -1, -1


@jit
def hom_count(order, back_ptr, back_idx, adj, nbr_ptr, nbr_idx, domain, budget):
    m = order.shape[0]
    if m == 0:
        return 1, 0
    assign = np.zeros(m, np.int64)
    cand = np.zeros(m, np.int64)
    count = 0
    nodes = 0
    level = 0
    while level >= 0:
        if level == m - 1:
            i = 0
            while True:
                i, g = _next_cand(level, i, order, back_ptr, back_idx, assign, adj, nbr_ptr, nbr_idx, domain)
                if i < 0:
                    break
                count += 1
                nodes += 1
                i += 1
            if nodes > budget:
                return -1, nodes
            level -= 1
            continue
        i, g = _next_cand(level, cand[level], order, back_ptr, back_idx, assign, adj, nbr_ptr, nbr_idx, domain)
        if i < 0:
            cand[level] = 0
            level -= 1
            continue
        cand[level] = i + 1
        assign[level] = g
        nodes += 1
        if nodes > budget:
            return -1, nodes
        level += 1
    return count, nodes


@jit
def hom_colour_histogram(order, back_ptr, back_idx, adj, nbr_ptr, nbr_idx, domain, colour, weight, hist, budget):
    """Accumulate ``hist[code(c o h)] += 1`` over all homomorphisms ``h``.

    ``code`` is ``sum(colour[h(v)] * weight[v])`` over pattern vertices ``v``.
    """
    m = order.shape[0]
    if m == 0:
        hist[0] += 1
        return 1, 0
    assign = np.zeros(m, np.int64)
    cand = np.zeros(m, np.int64)
    count = 0
    nodes = 0
    level = 0
    last = order[m - 1]
    while level >= 0:
        if level == m - 1:
            base = 0
            for l in range(m - 1):
                base += colour[assign[l]] * weight[order[l]]
            i = 0
            while True:
                i, g = _next_cand(level, i, order, back_ptr, back_idx, assign, adj, nbr_ptr, nbr_idx, domain)
                if i < 0:
                    break
                hist[base + colour[g] * weight[last]] += 1
                count += 1
                nodes += 1
                i += 1
            if nodes > budget:
                return -1, nodes
            level -= 1
            continue
        i, g = _next_cand(level, cand[level], order, back_ptr, back_idx, assign, adj, nbr_ptr, nbr_idx, domain)
        if i < 0:
            cand[level] = 0
            level -= 1
            continue
        cand[level] = i + 1
        assign[level] = g
        nodes += 1
        if nodes > budget:
            return -1, nodes
        level += 1
    return count, nodes


@jit
def _extends(lo, hi, order, back_ptr, back_idx, assign, cand, adj, nbr_ptr, nbr_idx, domain, nodes, budget):
    """Depth-first existence check for levels ``lo..hi-1``; stops at the first success."""
    if lo == hi:
        return 1, nodes
    for l in range(lo, hi):
        cand[l] = 0
    level = lo
    while level >= lo:
        i, g = _next_cand(level, cand[level], order, back_ptr, back_idx, assign, adj, nbr_ptr, nbr_idx, domain)
        if i < 0:
            cand[level] = 0
            level -= 1
            continue
        cand[level] = i + 1
        assign[level] = g
        nodes += 1
        if nodes > budget:
            return -1, nodes
        level += 1
        if level == hi:
            return 1, nodes
    return 0, nodes


@jit
def answers(kx, comp_ptr, order, back_ptr, back_idx, adj, nbr_ptr, nbr_idx, domain, budget, out):
    """Count (and optionally collect) projections onto the first ``kx`` levels.

    Levels ``kx..`` hold the existential vertices, grouped into independent
    blocks ``comp_ptr[c]..comp_ptr[c+1]``.  Up to ``out.shape[0]`` answers are
    written into ``out``.
    """
    m = order.shape[0]
    assign = np.zeros(max(m, 1), np.int64)
    cand = np.zeros(max(m, 1), np.int64)
    ncomp = comp_ptr.shape[0] - 1
    count = 0
    nodes = 0
    cap = out.shape[0]
    level = 0
    while level >= 0:
        if level == kx:
            ok = True
            for c in range(ncomp):
                found, nodes = _extends(comp_ptr[c], comp_ptr[c + 1], order, back_ptr, back_idx, assign, cand,
                                        adj, nbr_ptr, nbr_idx, domain, nodes, budget)
                if found < 0:
                    return -1, nodes
                if found == 0:
                    ok = False
                    break
            if ok:
                if count < cap:
                    for l in range(kx):
                        out[count, l] = assign[l]
                count += 1
            level -= 1
            continue
        i, g = _next_cand(level, cand[level], order, back_ptr, back_idx, assign, adj, nbr_ptr, nbr_idx, domain)
        if i < 0:
            cand[level] = 0
            level -= 1
            continue
        cand[level] = i + 1
        assign[level] = g
        nodes += 1
        if nodes > budget:
            return -1, nodes
        level += 1
    return count, nodes


# ---------------------------------------------------------------------------
# treewidth: dynamic programming over eliminated-vertex sets


@jit
def elimination_degree(s, v, adjmask):
    """Number of vertices outside ``s + v`` reachable from ``v`` through ``s``."""
    reach = np.int64(1) << v
    nb = adjmask[v]
    frontier = nb & s & ~reach
    while frontier != 0:
        reach |= frontier
        new = np.int64(0)
        f = frontier
        while f != 0:
            low = f & -f
            u = 0
            while (low >> u) != 1:
                u += 1
            new |= adjmask[u]
            f ^= low
        nb |= new
        frontier = new & s & ~reach
    q = nb & ~s & ~(np.int64(1) << v)
    c = 0
    while q != 0:
        q &= q - 1
        c += 1
    return c


@jit
def treewidth_table(adjmask, n):
    """``table[s]`` = best width achievable eliminating the vertices outside ``s``."""
    full = (np.int64(1) << n) - 1
    table = np.empty(full + 1, np.int8)
    table[full] = 0
    s = full - 1
    while s >= 0:
        best = 127
        for v in range(n):
            if (s >> v) & 1:
                continue
            q = elimination_degree(s, v, adjmask)
            if q >= best:
                continue
            val = table[s | (np.int64(1) << v)]
            if q > val:
                val = q
            if val < best:
                best = val
        table[s] = best
        s -= 1
    return table

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wldim.answers import (
    ExtendableAssignment,
    ans_via_interpolation,
    count_answers_tau,
    count_cp_answers,
    cp_answer_set,
    enumerate_extendable,
    extend_assignment,
    first_free_adjacent_to_y,
    parity_edge_assignment,
    solve_vandermonde,
)
from wldim.cfi import cfi
from wldim.errors import NoExtension, OutOfScope, WldimError
from wldim.graph import complete_graph, cycle_graph, is_homomorphism, path_graph
from wldim.query import count_answers, from_edges, parse_query
from wldim.quantum import star_query
from wldim.width import ell_copy

from . import oracles
from .strategies import graphs

EDGE = parse_query("q(x) :- E(x,y)")
S2 = star_query(2)
C4Q = parse_query("q(x1,x2) :- E(x1,y1), E(y1,x2), E(x2,y2), E(y2,y3), E(y3,x1)")


def brute_cp_answers(q, ec, chi):
    """Colour-prescribed answers by trying every choice inside each colour class."""
    col = [ec.gamma[w] for w in chi.colour]
    classes = [[u for u in range(chi.result.n) if col[u] == v] for v in range(q.H.n)]
    out = set()
    for f in itertools.product(*classes):
        if oracles.is_hom(q.H, chi.result, f):
            out.add(tuple(f[x] for x in q.X))
    return out


@pytest.mark.parametrize("q", [EDGE, S2, C4Q], ids=["edge", "star2", "cycle-ish"])
@pytest.mark.parametrize("ell", [1, 3])
@pytest.mark.parametrize("odd", [False, True])
def test_cp_answers_equal_extendable(q, ell, odd):
    ec = ell_copy(q, ell)
    W = {first_free_adjacent_to_y(q)} if odd else set()
    chi = cfi(ec.F, W)
    cp = cp_answer_set(q, chi.coloured, ec.gamma)
    assert cp == brute_cp_answers(q, ec, chi)
    ext = {e.phi for e in enumerate_extendable(q, ec, W, chi)}
    assert cp == ext
    assert count_cp_answers(q, chi.coloured, ec.gamma) == len(cp)


@pytest.mark.parametrize("q, ell, sizes", [(EDGE, 3, (4, 3)), (S2, 3, (16, 12)), (S2, 5, (256, 240))])
def test_extendable_gap_values(q, ell, sizes):
    # derived by exhaustive enumeration
    ec = ell_copy(q, ell)
    x1 = first_free_adjacent_to_y(q)
    got = tuple(len(enumerate_extendable(q, ec, W)) for W in ((), (x1,)))
    assert got == sizes


def test_classify_reports_failures():
    ec = ell_copy(S2, 3)
    assert len(enumerate_extendable(S2, ec, (), only_extendable=False)) == 16
    rows = enumerate_extendable(S2, ec, (0,), only_extendable=False)
    assert len(rows) == 16
    assert any(not r.e2 for r in rows)
    assert all(r.e1 for r in rows)  # x1, x2 are not adjacent in S2
    assert sum(r.extendable for r in rows) == 12


@pytest.mark.parametrize("q", [EDGE, S2, C4Q], ids=["edge", "star2", "cycle-ish"])
@pytest.mark.parametrize("odd", [False, True])
def test_every_extendable_assignment_extends(q, odd):
    ec = ell_copy(q, 3)
    W = {first_free_adjacent_to_y(q)} if odd else set()
    chi = cfi(ec.F, W)
    col = [ec.gamma[w] for w in chi.colour]
    for phi in enumerate_extendable(q, ec, W, chi):
        h = extend_assignment(phi, q, ec, W, chi)
        assert is_homomorphism(q.H, chi.result, h.map)
        assert all(col[h.map[v]] == v for v in range(q.H.n))
        assert tuple(h.map[x] for x in q.X) == phi.phi


def test_non_extendable_raises():
    ec = ell_copy(S2, 3)
    rows = enumerate_extendable(S2, ec, (0,), only_extendable=False)
    bad = next(r for r in rows if not r.extendable)
    with pytest.raises(NoExtension):
        extend_assignment(bad, S2, ec, (0,))


def test_scope_checks():
    with pytest.raises(WldimError):
        enumerate_extendable(S2, ell_copy(S2, 2))
    full = from_edges(3, complete_graph(3).edges, range(3))
    with pytest.raises(OutOfScope):
        first_free_adjacent_to_y(full)


def test_first_free_adjacent_to_y():
    q = parse_query("q(a,b) :- E(a,b), E(b,y)")
    assert first_free_adjacent_to_y(q) == 1


def test_ans_tau_sums_to_cp_free_total():
    ec = ell_copy(S2, 3)
    chi = cfi(ec.F, ())
    ident = tuple(S2.X)
    total = sum(count_answers_tau(S2, chi.coloured, t, ec.gamma) for t in itertools.product(range(3), repeat=2))
    assert total == count_answers(S2, chi.result)
    assert count_answers_tau(S2, chi.coloured, ident, ec.gamma) >= count_cp_answers(S2, chi.coloured, ec.gamma)


def test_ans_id_gap_star():
    ec = ell_copy(S2, 3)
    ident = tuple(S2.X)
    a = count_answers_tau(S2, cfi(ec.F, ()).coloured, ident, ec.gamma)
    b = count_answers_tau(S2, cfi(ec.F, (0,)).coloured, ident, ec.gamma)
    assert a > b


def test_alignment_errors():
    chi = cfi(complete_graph(3), ())
    with pytest.raises(WldimError):
        count_cp_answers(S2, chi.coloured, gamma=(0, 1))
    with pytest.raises(WldimError):
        count_answers_tau(S2, chi.coloured, (0, 7))


# -- parity edge assignments ----------------------------------------------


def test_parity_c4():
    pa = parity_edge_assignment(cycle_graph(4), {0, 2})
    assert pa.check()


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7, min_n=1, connected=True), st.data())
def test_parity_assignment_property(g, data):
    S = data.draw(st.sets(st.integers(0, g.n - 1)))
    if len(S) % 2:
        with pytest.raises(WldimError):
            parity_edge_assignment(g, S)
        return
    pa = parity_edge_assignment(g, S)
    assert pa.check()
    for v in range(g.n):
        deg = sum(pa.beta[tuple(sorted((u, v)))] for u in g.neighbours[v])
        assert deg % 2 == (v in S)


# -- interpolation ---------------------------------------------------------


def test_vandermonde_solver():
    rows = [[i**e for i in range(1, 4)] for e in range(1, 4)]
    x = [2, 0, 5]
    rhs = [sum(r[i] * x[i] for i in range(3)) for r in rows]
    assert solve_vandermonde(rows, rhs) == x


@pytest.mark.parametrize(
    "q, g, expected",
    [(EDGE, path_graph(2), 2), (S2, complete_graph(3), 9), (EDGE, path_graph(3), 3)],
)
def test_interpolation_anchors(q, g, expected):
    assert ans_via_interpolation(q, g) == expected == count_answers(q, g)


def test_interpolation_budget():
    with pytest.raises(OutOfScope):
        ans_via_interpolation(parse_query("q(x) :- E(x,y), E(y,z)"), cycle_graph(6), max_nhat=27)


def test_extendable_assignment_flag():
    e = ExtendableAssignment((0,), (frozenset(),), True, False)
    assert not e.extendable

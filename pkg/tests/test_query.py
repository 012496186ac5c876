import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wldim.errors import OutOfScope, ParseError
from wldim.graph import Graph, complete_graph, cycle_graph, disjoint_union, path_graph
from wldim.query import (
    ConjunctiveQuery,
    answers,
    count_answers,
    from_edges,
    is_connected,
    is_counting_equivalent,
    is_counting_minimal,
    is_query_isomorphic,
    minimize,
    parse_query,
    partial_automorphisms,
)
from wldim.quantum import star_query

from . import oracles
from .strategies import graphs

K3 = complete_graph(3)
TWO_K3 = disjoint_union(K3, K3)
C6 = cycle_graph(6)
EDGE = parse_query("q(x) :- E(x,y)")
PATH = parse_query("q(x) :- E(x,y), E(y,z)")
S2 = parse_query("q(x1,x2) :- E(x1,y), E(x2,y)")


@st.composite
def queries(draw, max_n=5):
    g = draw(graphs(max_n=max_n, min_n=2, connected=True))
    X = draw(st.lists(st.integers(0, g.n - 1), min_size=1, max_size=g.n, unique=True))
    return ConjunctiveQuery(g, tuple(X))


# -- parsing ---------------------------------------------------------------


def test_parse_star():
    assert S2.k == 2 and S2.H.n == 3 and S2.H.m == 2
    assert is_query_isomorphic(S2, star_query(2))


def test_parse_path():
    assert PATH.X == (0,) and PATH.H == path_graph(3)


def test_dsl_round_trip():
    for q in (EDGE, PATH, S2):
        assert parse_query(q.to_dsl()) == q


@pytest.mark.parametrize(
    "text",
    [
        "q(x) :- E(x,x)",
        "q(x) :- R(x,y)",
        "q(x,x) :- E(x,y)",
        "q(x,z) :- E(x,y)",
        "q(x) E(x,y)",
        "q(x) :- E(x,y",
        "",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_query(text)


def test_connectivity():
    assert is_connected(S2)
    assert not is_connected(parse_query("q(a,c) :- E(a,b), E(c,d)"))
    assert is_connected(EDGE)
    with pytest.raises(OutOfScope):
        minimize(parse_query("q(a,c) :- E(a,b), E(c,d)"))


# -- answers ---------------------------------------------------------------


@pytest.mark.parametrize(
    "q, g, expected",
    [
        (S2, K3, 9),
        (S2, TWO_K3, 18),
        (S2, C6, 18),
        (EDGE, TWO_K3, 6),
        (from_edges(2, [(0, 1)], [0, 1]), K3, 6),
        (star_query(3), TWO_K3, 42),
    ],
)
def test_answer_count_anchors(q, g, expected):
    # brute-force values; note the 2-star on 2K3 gives 18
    assert count_answers(q, g) == expected == len(oracles.answer_set(q, g))


@settings(max_examples=80, deadline=None)
@given(queries(), graphs(max_n=5))
def test_answers_match_brute_force(q, g):
    got = answers(q, g)
    assert got == sorted(oracles.answer_set(q, g))
    assert count_answers(q, g) == len(got)


def test_full_query_counts_homs():
    q = from_edges(3, [(0, 1), (1, 2), (0, 2)], [0, 1, 2])
    assert count_answers(q, K3) == 6 == oracles.hom_count(K3, K3)


# -- minimisation ------------------------------------------------------------


def test_path_minimizes_to_edge():
    assert is_query_isomorphic(minimize(PATH), EDGE)
    assert is_counting_equivalent(PATH, EDGE)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_stars_are_minimal(k):
    assert is_counting_minimal(star_query(k))
    assert is_query_isomorphic(minimize(star_query(k)), star_query(k))


def test_full_queries_are_minimal():
    q = from_edges(6, cycle_graph(6).edges, range(6))
    assert is_query_isomorphic(minimize(q), q)


def test_not_equivalent_different_arity():
    assert not is_counting_equivalent(S2, star_query(3))
    assert is_counting_equivalent(S2, S2)


def _brute_minimal(q):
    xs = set(q.X)
    for f in oracles.all_maps(q.H.n, q.H.n):
        if not oracles.is_hom(q.H, q.H, f):
            continue
        if {f[x] for x in q.X} != xs:
            continue
        if len(set(f)) < q.H.n:
            return False
    return True


@settings(max_examples=60, deadline=None)
@given(queries(max_n=5), st.lists(graphs(max_n=4), min_size=3, max_size=3))
def test_minimize_preserves_counts_and_is_minimal(q, gs):
    core = minimize(q)
    assert core.k == q.k
    assert _brute_minimal(core)
    assert is_counting_minimal(core)
    for g in gs:
        assert count_answers(core, g) == count_answers(q, g)


@settings(max_examples=40, deadline=None)
@given(queries(max_n=5))
def test_is_counting_minimal_matches_brute_force(q):
    assert is_counting_minimal(q) == _brute_minimal(q)


# -- partial automorphisms -------------------------------------------------


def test_partial_automorphisms():
    assert set(partial_automorphisms(S2)) == {(0, 1), (1, 0)}
    assert set(partial_automorphisms(EDGE)) == {(0,)}
    full = from_edges(3, K3.edges, [0, 1, 2])
    assert len(partial_automorphisms(full)) == 6


@settings(max_examples=40, deadline=None)
@given(queries(max_n=5))
def test_partial_automorphisms_brute_force(q):
    expect = set()
    pos = {x: i for i, x in enumerate(q.X)}
    for p in itertools.permutations(range(q.H.n)):
        if Graph(q.H.n, q.H.edges).relabel(p) == q.H and {p[x] for x in q.X} == set(q.X):
            expect.add(tuple(pos[p[x]] for x in q.X))
    assert set(partial_automorphisms(q)) == expect

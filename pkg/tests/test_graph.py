import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wldim.config import limits
from wldim.errors import BudgetExceeded, NotAHomomorphism, ParseError
from wldim.graph import (
    ColouredGraph,
    Graph,
    Homomorphism,
    complement,
    complete_bipartite,
    complete_graph,
    count_hom,
    count_hom_tau,
    cycle_graph,
    disjoint_union,
    empty_graph,
    hom_tau_histogram,
    iter_homs,
    parse_graph,
    path_graph,
    star_graph,
    tensor,
)
from wldim.iso import automorphisms, compose, find_isomorphism, inverse, is_isomorphic

from . import oracles
from .strategies import graphs


K3 = complete_graph(3)
C6 = cycle_graph(6)
TWO_K3 = disjoint_union(K3, K3)


# -- construction and parsing ---------------------------------------------


def test_edges_are_canonical():
    assert Graph(3, ((2, 0), (1, 0), (0, 1))).edges == ((0, 1), (0, 2))


@pytest.mark.parametrize("edges", [((0, 0),), ((0, 3),), ((-1, 0),)])
def test_invalid_edges_rejected(edges):
    with pytest.raises(ValueError):
        Graph(3, edges)


def test_labels_do_not_affect_equality():
    assert Graph(2, ((0, 1),), ("a", "b")) == Graph(2, ((0, 1),))


def test_parse_round_trip():
    g = parse_graph("# triangle\np 3\ne 0 1\ne 1 2\ne 2 0\n")
    assert g == K3
    assert parse_graph(g.to_text()) == g


@pytest.mark.parametrize(
    "text, line",
    [
        ("p 3\ne 0 0\n", 2),
        ("p 3\ne 0 5\n", 2),
        ("e 0 1\n", 1),
        ("p 2\nq 1\n", 2),
        ("p 2\np 2\n", 2),
        ("p x\n", 1),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_graph(text)
    assert exc.value.line == line


def test_missing_header():
    with pytest.raises(ParseError):
        parse_graph("# nothing\n")


def test_standard_graph_sizes():
    assert complete_graph(5).m == 10
    assert cycle_graph(6).m == 6
    assert path_graph(4).m == 3
    assert star_graph(3).degree(3) == 3
    assert complete_bipartite(2, 3).m == 6
    assert empty_graph(4).m == 0
    assert TWO_K3.n == 6 and len(TWO_K3.components()) == 2


def test_tensor_adjacency():
    g = tensor(path_graph(2), K3)
    for (a, b), (c, d) in itertools.combinations(itertools.product(range(2), range(3)), 2):
        expect = path_graph(2).has_edge(a, c) and K3.has_edge(b, d)
        assert g.has_edge(a * 3 + b, c * 3 + d) == expect


def test_complement_c5_self_complementary():
    assert is_isomorphic(complement(cycle_graph(5)), cycle_graph(5))


# -- homomorphisms -------------------------------------------------------


@pytest.mark.parametrize(
    "h, g, expected",
    [
        (path_graph(2), K3, 6),
        (K3, K3, 6),
        (K3, C6, 0),
        (K3, TWO_K3, 12),
        (path_graph(3), cycle_graph(4), 16),
        (empty_graph(2), K3, 9),
    ],
)
def test_hom_count_anchors(h, g, expected):
    # values derived by brute-force enumeration
    assert count_hom(h, g) == expected == oracles.hom_count(h, g)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=4), graphs(max_n=5))
def test_hom_count_matches_brute_force(h, g):
    assert count_hom(h, g) == oracles.hom_count(h, g)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=4), graphs(max_n=5))
def test_iter_homs_enumerates_exactly(h, g):
    got = list(iter_homs(h, g))
    assert len(got) == len(set(got)) == oracles.hom_count(h, g)
    assert all(oracles.is_hom(h, g, f) for f in got)


def test_iter_homs_injective_on():
    homs = list(iter_homs(path_graph(3), K3, injective_on=(0, 2)))
    assert len(homs) == 6 and all(f[0] != f[2] for f in homs)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=3, min_n=1), graphs(max_n=3, min_n=1), graphs(max_n=3, min_n=1))
def test_hom_count_multiplicative_under_tensor(h, a, b):
    assert count_hom(h, tensor(a, b)) == count_hom(h, a) * count_hom(h, b)


def test_homomorphism_validation():
    Homomorphism(path_graph(2), K3, (0, 1))
    with pytest.raises(NotAHomomorphism):
        Homomorphism(path_graph(2), K3, (0, 0))
    with pytest.raises(NotAHomomorphism):
        ColouredGraph(K3, path_graph(2), (0, 1, 0))


def test_budget_exceeded():
    with limits(max_assignments=10):
        with pytest.raises(BudgetExceeded):
            count_hom(path_graph(4), complete_graph(6))


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=3, min_n=1), graphs(max_n=5, min_n=1))
def test_tau_histogram_partitions_homs(h, p):
    cg = ColouredGraph(p, p, tuple(range(p.n)))
    hist = hom_tau_histogram(h, cg)
    assert sum(hist.values()) == count_hom(h, p)
    for tau, c in hist.items():
        assert count_hom_tau(h, cg, tau) == c


def test_count_hom_tau_matches_oracle_on_coloured_graph():
    g = C6
    pattern = K3
    colour = tuple(v % 3 for v in range(6))
    cg = ColouredGraph(g, pattern, colour)
    for tau in itertools.permutations(range(3), 2):
        assert count_hom_tau(path_graph(2), cg, tau) == oracles.hom_tau_count(path_graph(2), g, colour, tau)


# -- isomorphism ---------------------------------------------------------


@pytest.mark.parametrize(
    "g, size",
    [(C6, 12), (K3, 6), (path_graph(3), 2), (TWO_K3, 72), (complete_bipartite(2, 3), 12), (empty_graph(0), 1)],
)
def test_automorphism_group_sizes(g, size):
    auts = automorphisms(g)
    assert len(auts) == size
    for p in auts:
        assert g.relabel(p) == g


def test_two_k3_not_c6():
    assert not is_isomorphic(TWO_K3, C6)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_isomorphism_of_relabelled_copy(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    iso = find_isomorphism(g, h)
    assert iso is not None
    assert g.relabel(iso) == h


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=6), graphs(max_n=6))
def test_isomorphism_matches_networkx(a, b):
    assert is_isomorphic(a, b) == oracles.nx_iso(a, b)


def test_coloured_isomorphism_respects_colours():
    p = path_graph(3)
    assert is_isomorphic(p, p, (0, 1, 2), (2, 1, 0))
    assert not is_isomorphic(p, p, (0, 1, 2), (1, 0, 2))


def test_compose_inverse():
    p = (2, 0, 1)
    assert compose(p, inverse(p)) == (0, 1, 2)


def test_automorphisms_respect_colouring():
    auts = automorphisms(C6, np.array([0, 1, 0, 1, 0, 1]))
    assert len(auts) == 6

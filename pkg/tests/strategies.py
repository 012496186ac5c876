"""Shared hypothesis strategies."""

import itertools

from hypothesis import strategies as st

from wldim.graph import Graph


@st.composite
def graphs(draw, max_n=6, min_n=0, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    if connected and n > 1:
        # random spanning tree first, then extra edges
        tree = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
        extra = draw(st.lists(st.sampled_from(pairs), unique=True))
        return Graph(n, tuple(tree) + tuple(extra))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, tuple(chosen))

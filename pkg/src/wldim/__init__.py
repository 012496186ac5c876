"""Weisfeiler-Leman dimension of conjunctive queries."""

from .graph import Graph, parse_graph
from .query import ConjunctiveQuery, count_answers, minimize, parse_query
from .width import extension_width, semantic_extension_width, treewidth
from .witness import build_witness, verify_witness, wl_dimension
from .wl import wl_equivalent

__all__ = [
    "ConjunctiveQuery",
    "Graph",
    "build_witness",
    "count_answers",
    "extension_width",
    "minimize",
    "parse_graph",
    "parse_query",
    "semantic_extension_width",
    "treewidth",
    "verify_witness",
    "wl_dimension",
    "wl_equivalent",
]

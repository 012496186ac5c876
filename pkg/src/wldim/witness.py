"""WL-dimension of a query and constructive lower-bound witnesses.

A witness for a query of semantic extension width ``k`` is a pair of graphs
that are ``(k-1)``-WL equivalent but have different answer counts.  The pair
is built from the CFI graphs of an l-copy of the counting-minimal core,
twisted at a free variable adjacent to the existential part.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .answers import count_answers_tau, first_free_adjacent_to_y
from .cfi import CloneSpec, cfi, clone_blocks
from .errors import OutOfScope
from .graph import ColouredGraph, Graph, parse_graph
from .query import ConjunctiveQuery, count_answers, minimize, parse_query, require_connected
from .width import choose_witness_ell, ell_copy, extension_width, semantic_extension_width
from .wl import hom_indist_oracle, wl_equivalent

DEFAULT_ORACLE_BOUND = 7
Z_DOUBLINGS = 2


def wl_dimension(q: ConjunctiveQuery) -> int:
    return semantic_extension_width(q)


@dataclass
class WitnessCertificate:
    query: ConjunctiveQuery
    minimized: ConjunctiveQuery
    sew: int
    ell: int
    F: Graph
    x1: int  # position in X of the twisted free variable
    block_vertices: tuple
    z: tuple
    G: Graph
    G2: Graph
    counts: tuple
    wl_level: int
    wl_equivalent: bool
    oracle: dict
    wl_at_k: bool
    checks: dict = field(default_factory=dict)
    valid: bool = False
    status: str = ""
    oracle_bound: int = DEFAULT_ORACLE_BOUND

    def to_json(self) -> dict:
        def graph_json(g):
            return {"text": g.to_text(), "labels": [g.label(v) for v in range(g.n)]}

        return {
            "query": self.query.to_dsl(),
            "minimized": self.minimized.to_dsl(),
            "sew": self.sew,
            "ell": self.ell,
            "F": graph_json(self.F),
            "x1": self.x1,
            "blockVertices": list(self.block_vertices),
            "z": list(self.z),
            "G": graph_json(self.G),
            "G2": graph_json(self.G2),
            "counts": list(self.counts),
            "wl": {
                "level": self.wl_level,
                "equivalent": self.wl_equivalent,
                "oracle": self.oracle,
                "atK": self.wl_at_k,
            },
            "checks": dict(sorted(self.checks.items())),
            "valid": self.valid,
            "status": self.status,
            "oracleBound": self.oracle_bound,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "WitnessCertificate":
        def graph_of(d):
            g = parse_graph(d["text"])
            return Graph(g.n, g.edges, d.get("labels"))

        wl = doc["wl"]
        return cls(
            query=parse_query(doc["query"]),
            minimized=parse_query(doc["minimized"]),
            sew=int(doc["sew"]),
            ell=int(doc["ell"]),
            F=graph_of(doc["F"]),
            x1=int(doc["x1"]),
            block_vertices=tuple(doc["blockVertices"]),
            z=tuple(doc["z"]),
            G=graph_of(doc["G"]),
            G2=graph_of(doc["G2"]),
            counts=tuple(doc["counts"]),
            wl_level=int(wl["level"]),
            wl_equivalent=bool(wl["equivalent"]),
            oracle=wl["oracle"],
            wl_at_k=bool(wl["atK"]),
            checks=dict(doc.get("checks", {})),
            valid=bool(doc["valid"]),
            status=doc.get("status", ""),
            oracle_bound=int(doc.get("oracleBound", DEFAULT_ORACLE_BOUND)),
        )


def _z_search(q, c0: ColouredGraph, c1: ColouredGraph, blocks, limit, max_rounds=Z_DOUBLINGS):
    """Lexicographic search over ``{1..limit}^|blocks|`` for differing counts,
    doubling ``limit`` on exhaustion; tuples already tried are skipped."""
    prev = 1
    for _ in range(max_rounds + 1):
        found = _z_grid(q, c0, c1, blocks, prev, limit)
        if found is not None:
            return found
        prev, limit = limit, 2 * limit
    return None


def _z_grid(q, c0, c1, blocks, prev, limit):
    for z in itertools.product(range(1, limit + 1), repeat=len(blocks)):
        if max(z) <= prev:
            continue
        spec = CloneSpec(blocks, z)
        g0 = clone_blocks(c0, spec).graph
        g1 = clone_blocks(c1, spec).graph
        a, b = count_answers(q, g0), count_answers(q, g1)
        if a != b:
            return z, g0, g1, (a, b)
    return None


def build_witness(q: ConjunctiveQuery, oracle_bound: int = DEFAULT_ORACLE_BOUND) -> WitnessCertificate:
    """Construct and check a ``(k-1)``-WL-equivalent pair separated by ``|Ans(q, .)|``."""
    require_connected(q)
    if q.k == 0:
        raise OutOfScope("queries without free variables are out of scope")
    core = minimize(q)
    k = extension_width(core)
    checks = {}
    if not core.Y:
        # full query: CFI pair over H itself
        ell, F, x1 = 1, core.H, 0
        chi0, chi1 = cfi(F, ()), cfi(F, (0,))
        blocks, z = tuple(core.X), tuple(1 for _ in core.X)
        G, G2 = chi0.result, chi1.result
        counts = (count_answers(q, G), count_answers(q, G2))
    else:
        ell = choose_witness_ell(core)
        ec = ell_copy(core, ell)
        F = ec.F
        x1 = first_free_adjacent_to_y(core)
        chi0, chi1 = cfi(F, ()), cfi(F, (x1,))
        ident = tuple(core.X)
        gap = (
            count_answers_tau(core, chi0.coloured, ident, ec.gamma),
            count_answers_tau(core, chi1.coloured, ident, ec.gamma),
        )
        checks["ans_id_gap"] = gap[0] > gap[1]
        blocks = tuple(range(core.k))  # the free variables of F
        G, G2 = chi0.result, chi1.result
        counts = (count_answers(q, G), count_answers(q, G2))
        z = tuple(1 for _ in blocks)
        if counts[0] == counts[1]:
            found = _z_search(q, chi0.coloured, chi1.coloured, blocks, core.k + 1)
            if found is not None:
                z, G, G2, counts = found
    wl_level = k - 1
    cert = WitnessCertificate(
        query=q,
        minimized=core,
        sew=k,
        ell=ell,
        F=F,
        x1=x1,
        block_vertices=blocks,
        z=z,
        G=G,
        G2=G2,
        counts=counts,
        wl_level=wl_level,
        wl_equivalent=wl_equivalent(G, G2, wl_level),
        oracle=hom_indist_oracle(G, G2, wl_level, oracle_bound).to_json(),
        wl_at_k=wl_equivalent(G, G2, k),
        oracle_bound=oracle_bound,
    )
    checks["counts_differ"] = counts[0] != counts[1]
    checks["wl_k_minus_1"] = cert.wl_equivalent
    checks["oracle_equal"] = cert.oracle["verdict"] == "equal-up-to-bound"
    checks["no_false_witness"] = (not cert.wl_at_k) or counts[0] == counts[1]
    cert.checks = checks
    cert.valid = checks["counts_differ"] and checks["wl_k_minus_1"] and checks["oracle_equal"]
    if cert.valid:
        cert.status = "valid"
    elif not core.Y and not checks["counts_differ"]:
        cert.status = "inconclusive (full-query case)"
    else:
        failed = sorted(n for n, ok in checks.items() if not ok)
        cert.status = "invalid: " + ", ".join(failed)
    return cert


def verify_witness(cert: WitnessCertificate) -> dict:
    """Recompute everything a certificate claims; ``{check: passed}``."""
    q = cert.query
    report = {}
    c = (count_answers(q, cert.G), count_answers(q, cert.G2))
    report["counts_match"] = tuple(cert.counts) == c
    report["counts_differ"] = c[0] != c[1]
    k = semantic_extension_width(q)
    report["sew_matches"] = k == cert.sew
    report["wl_level_is_sew_minus_1"] = cert.wl_level == k - 1
    report["wl_k_minus_1"] = wl_equivalent(cert.G, cert.G2, cert.wl_level)
    verdict = hom_indist_oracle(cert.G, cert.G2, cert.wl_level, cert.oracle_bound)
    report["oracle_equal"] = not verdict.distinguished
    at_k = wl_equivalent(cert.G, cert.G2, k)
    report["no_false_witness"] = (not at_k) or c[0] == c[1]
    expected_valid = report["counts_differ"] and report["wl_k_minus_1"] and report["oracle_equal"]
    report["valid_flag_consistent"] = cert.valid == expected_valid
    return report


def upper_bound_check(q: ConjunctiveQuery, g1: Graph, g2: Graph) -> dict:
    """If the graphs are ``ew``-WL equivalent, their answer counts must agree."""
    k = extension_width(minimize(q))
    if not wl_equivalent(g1, g2, k):
        return {"k": k, "status": "precondition not met", "ok": True}
    a, b = count_answers(q, g1), count_answers(q, g2)
    return {"k": k, "counts": [a, b], "status": "consistent" if a == b else "violation", "ok": a == b}

import dataclasses
import json

import pytest

from wldim.errors import OutOfScope
from wldim.graph import complete_graph, cycle_graph, disjoint_union
from wldim.query import from_edges, parse_query
from wldim.quantum import star_query
from wldim.wl import wl_equivalent
from wldim.witness import WitnessCertificate, build_witness, upper_bound_check, verify_witness, wl_dimension

EDGE = parse_query("q(x) :- E(x,y)")
PATH = parse_query("q(x) :- E(x,y), E(y,z)")
K3 = complete_graph(3)
FULL_K3 = from_edges(3, K3.edges, range(3))


@pytest.fixture(scope="module")
def star_cert():
    return build_witness(star_query(2))


def test_wl_dimension_values():
    assert [wl_dimension(star_query(k)) for k in (1, 2, 3)] == [1, 2, 3]
    assert wl_dimension(FULL_K3) == 2
    assert wl_dimension(PATH) == 1


def test_star_witness(star_cert):
    c = star_cert
    assert c.valid and c.status == "valid"
    assert (c.sew, c.ell, c.wl_level) == (2, 3, 1)
    assert c.G.n == c.G2.n == 14
    assert c.counts == (94, 86)  # derived by brute-force answer counting
    assert wl_equivalent(c.G, c.G2, 1)
    assert not c.wl_at_k
    assert c.oracle["verdict"] == "equal-up-to-bound"
    assert c.checks["ans_id_gap"]


def test_star_witness_verifies(star_cert):
    report = verify_witness(star_cert)
    assert all(report.values()), report


def test_json_round_trip(star_cert):
    doc = json.loads(json.dumps(star_cert.to_json()))
    back = WitnessCertificate.from_json(doc)
    assert back.G == star_cert.G and back.counts == star_cert.counts
    assert back.G.label(0) == star_cert.G.label(0)
    assert all(verify_witness(back).values())


def test_tampered_counts_fail(star_cert):
    bad = dataclasses.replace(star_cert, counts=(1, 2))
    report = verify_witness(bad)
    assert not report["counts_match"]


def test_wrong_wl_level_fails(star_cert):
    bad = dataclasses.replace(star_cert, wl_level=2)
    report = verify_witness(bad)
    assert not report["wl_k_minus_1"]
    assert not report["wl_level_is_sew_minus_1"]


def test_edge_witness():
    c = build_witness(EDGE)
    assert c.valid and c.sew == 1 and c.ell == 1 and c.wl_level == 0
    assert c.counts == (2, 0)
    assert all(verify_witness(c).values())


def test_full_query_witness():
    c = build_witness(FULL_K3)
    assert c.valid and c.sew == 2 and c.counts == (12, 0)
    assert all(verify_witness(c).values())


def test_witness_uses_minimized_query():
    c = build_witness(PATH)
    assert c.sew == 1 and c.valid


def test_out_of_scope():
    with pytest.raises(OutOfScope):
        build_witness(parse_query("q(a,c) :- E(a,b), E(c,d)"))
    with pytest.raises(OutOfScope):
        build_witness(from_edges(2, [(0, 1)], []))


def test_deterministic():
    a = build_witness(star_query(2)).to_json()
    b = build_witness(star_query(2)).to_json()
    assert a == b


def test_upper_bound_check():
    s2 = star_query(2)
    assert upper_bound_check(s2, K3, K3)["status"] == "consistent"
    r = upper_bound_check(EDGE, disjoint_union(K3, K3), cycle_graph(6))
    assert r["status"] == "consistent" and r["counts"] == [6, 6]


def test_upper_bound_precondition(star_cert):
    r = upper_bound_check(star_query(2), star_cert.G, star_cert.G2)
    assert r["status"] == "precondition not met" and r["ok"]


def test_z_search_doubles_the_cap():
    from wldim.cfi import cfi
    from wldim.width import ell_copy
    from wldim.witness import _z_search

    q = star_query(2)
    F = ell_copy(q, 3).F
    c0, c1 = cfi(F, ()).coloured, cfi(F, (0,)).coloured
    # a cap of 1 admits only the all-ones tuple, so the hit comes after doubling
    z, g0, g1, counts = _z_search(q, c0, c1, (0, 1), 1)
    assert max(z) == 2 and counts[0] != counts[1]
    assert _z_search(q, c0, c1, (0, 1), 1, max_rounds=0) is None

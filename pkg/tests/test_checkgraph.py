from __future__ import annotations

from collections import Counter

import pytest

from planartanner.checkgraph import (
    CheckGraph,
    Identification,
    IdentificationMap,
    build_check_graph,
    build_check_inverse,
    check_identification,
    check_inverse_with_embedding,
    place_bits,
    region_boundary,
)
from planartanner.embedding import Embedding
from planartanner.errors import (
    ContractViolation,
    InvalidArgument,
    NonPlanarError,
    UnsupportedRate,
    UnsupportedSize,
)
from planartanner.tanner import TannerGraph

from conftest import fig1_graph, fig5_graph


def test_fig1_identifications(fig1):
    g, cg, ident, occ = fig1
    assert cg.m == 4 and len(cg.faces) == 4 and len(cg.edges) == 6
    a = ident["a"]
    assert a.kind == "faces" and len(a.faces) == 2
    assert cg.vc(a.faces) == {1, 2, 3, 4}
    assert ident["b"].kind == "edge" and set(cg.edges[ident["b"].target]) == {1, 2}
    assert ident["e"] == Identification("node", 3)
    assert occ.occupied_nodes == {3}
    assert len(occ.occupied_edges) == 3
    check_identification(g, cg, ident)


def test_fig5_identifications(fig5):
    g, cg, ident, occ = fig5
    assert cg.m == 5 and len(cg.faces) == 6 and len(cg.edges) == 9
    for b in "cde":
        assert ident[b].kind == "face"
        assert cg.face_corners[ident[b].target] == g.neighborhood(b)
    assert {frozenset(cg.edges[e]) for e in occ.occupied_edges} == {
        frozenset({1, 4}), frozenset({3, 5}), frozenset({1, 5})}


def test_invariants_on_ensemble(ensemble):
    for gg in ensemble:
        cg = gg.check_graph
        m = cg.m
        assert len(cg.faces) == 2 * m - 4
        assert len(cg.edges) == 3 * m - 6
        assert all(f.length == 3 for f in cg.faces)
        check_identification(gg.graph, cg, gg.identification)


def test_rebuild_is_deterministic(ensemble):
    for gg in ensemble[:30]:
        cg2, ident2, _ = build_check_graph(gg.graph, gg.embedding)
        assert cg2.same_structure(gg.check_graph)
        assert dict(ident2) == dict(gg.identification)


def test_place_bits_round_trip(ensemble):
    for gg in ensemble[:40]:
        g2, emb2 = place_bits(gg.check_graph, gg.identification, gg.graph.bit_nodes)
        assert emb2.genus() == 0
        assert {b: g2.neighborhood(b) for b in g2.bit_nodes} == {b: gg.graph.neighborhood(b) for b in gg.graph.bit_nodes}
        cg2, ident2, _ = build_check_graph(g2, emb2)
        if gg.graph.max_bit_degree() <= 3:
            assert cg2.same_structure(gg.check_graph)
        else:
            # fan chords inside high-degree regions follow the embedding's face order
            check_identification(g2, cg2, ident2)
            for b in g2.bit_nodes:
                assert cg2.vc(ident2[b].faces) == gg.check_graph.vc(gg.identification[b].faces)


def test_parallel_degree2_bits_share_one_edge():
    g = TannerGraph.from_neighborhoods({"a": [1, 2, 3], "b": [1, 2], "c": [1, 2]}, [1, 2, 3])
    cg, ident, occ = build_check_graph(g)
    assert ident["b"] == ident["c"]
    assert occ.edge_multiplicity(ident["b"].target) == 2
    assert Counter(frozenset(e) for e in cg.edges)[frozenset({1, 2})] == 1


def test_nonplanar_tanner_rejected():
    # K3,3 between three bits and three checks
    g = TannerGraph.from_neighborhoods({b: [1, 2, 3] for b in "xyz"}, [1, 2, 3])
    with pytest.raises(NonPlanarError):
        build_check_graph(g)


def test_small_check_set_rejected():
    g = TannerGraph.from_neighborhoods({"a": [1, 2], "b": [1]}, [1, 2])
    with pytest.raises(UnsupportedSize):
        build_check_graph(g)


def test_check_graph_requires_triangulation():
    square = Embedding.from_faces([(1, 2, 3, 4), (4, 3, 2, 1)])
    with pytest.raises(ContractViolation):
        CheckGraph(square)


def test_check_identification_detects_mismatch(fig1):
    g, cg, ident, _ = fig1
    bad = IdentificationMap(ident)
    bad["e"] = Identification("node", 4)
    with pytest.raises(ContractViolation):
        check_identification(g, cg, bad)
    bad = IdentificationMap(ident)
    bad["a"] = Identification("faces", ident["a"].faces[:1])
    with pytest.raises(ContractViolation):
        check_identification(g, cg, bad)


def test_region_boundary(fig5):
    _, cg, _, _ = fig5
    assert len(region_boundary(cg, [0])) == 3
    # two adjacent faces make a quadrilateral
    a, b = cg.edge_faces[0]
    assert len(region_boundary(cg, [a, b])) == 4
    with pytest.raises(InvalidArgument):
        region_boundary(cg, range(len(cg.faces)))


def test_check_inverse_rate_guard(fig5):
    g, cg, ident, _ = fig5
    with pytest.raises(UnsupportedRate):
        build_check_inverse(g, cg, ident)


def test_check_inverse_preserves_check_graph(ensemble):
    done = 0
    for gg in ensemble:
        g = gg.graph
        if g.n < len(gg.check_graph.faces):
            continue
        gp, emb, ident_p = check_inverse_with_embedding(g, gg.check_graph, gg.identification)
        assert gp.n == g.n
        assert gp.design_rate == g.design_rate
        assert len(gp.bits_of_degree(3)) == len(gg.check_graph.faces)
        assert not any(gp.degree(b) > 3 for b in gp.bit_nodes)
        direct = build_check_inverse(g, gg.check_graph, gg.identification)
        assert {b: gp.neighborhood(b) for b in gp.bit_nodes} == {b: direct.neighborhood(b) for b in direct.bit_nodes}
        cg2, _, _ = build_check_graph(gp, emb)
        assert cg2.same_structure(gg.check_graph)
        check_identification(gp, gg.check_graph, ident_p)
        done += 1
    assert done >= 30


def test_check_inverse_face_bit_names_avoid_collisions():
    nb = {"f1": [1], "f2": [2], "x": [3], "y": [1, 2], "z": [2, 3], "w": [1, 3], "v": [1], "u": [2]}
    g = TannerGraph.from_neighborhoods(nb, [1, 2, 3])
    cg, ident, _ = build_check_graph(g)
    gp = build_check_inverse(g, cg, ident)
    face_bits = [b for b in gp.bit_nodes if gp.degree(b) == 3]
    assert face_bits == ["_f1", "_f2"]
    assert set(gp.bit_nodes) - set(face_bits) <= set(g.bit_nodes)


def test_fig1_check_graph_unchanged_by_bit_order():
    g = fig1_graph()
    cg, _, _ = build_check_graph(g)
    g2 = TannerGraph.from_neighborhoods({b: sorted(g.neighborhood(b)) for b in reversed(g.bit_nodes)}, [1, 2, 3, 4])
    cg2, _, _ = build_check_graph(g2)
    assert cg.embedding.edge_multiset() == cg2.embedding.edge_multiset()


def test_fig5_has_distinct_degree3_neighbourhoods():
    g = fig5_graph()
    hoods = [g.neighborhood(b) for b in g.bits_of_degree(3)]
    assert len(set(hoods)) == len(hoods)


def test_disconnected_with_duplicate_face_bits():
    # two bits on checks 1, 3, 5 close both faces of their component; the
    # other components must still find a corner to attach to
    nb = {"a": [1, 3, 5], "b": [1, 3, 5], "c": [4, 6], "d": [2], "e": [4], "f": [6]}
    g = TannerGraph.from_neighborhoods(nb, [1, 2, 3, 4, 5, 6])
    cg, ident, _ = build_check_graph(g)
    assert len(cg.faces) == 2 * 6 - 4
    assert ident["a"].kind == ident["b"].kind == "face" and ident["a"] != ident["b"]
    check_identification(g, cg, ident)

from __future__ import annotations

import pytest

from planartanner.checkgraph import Identification, check_inverse_with_embedding
from planartanner.errors import ContractViolation, InvalidStep
from planartanner.tanner import TannerGraph
from planartanner.transform import (
    DE,
    DS1,
    DS2,
    TransformStep,
    apply_step,
    replay,
    same_up_to_bit_names,
    transform_sequence,
)

from conftest import face_with_corners, full_inverse, stacked_octahedron


def _inverse_cases(ensemble):
    for gg in ensemble:
        g = gg.graph
        if g.n < len(gg.check_graph.faces) or g.bits_of_degree(0):
            continue
        gp, _, ident_p = check_inverse_with_embedding(g, gg.check_graph, gg.identification)
        yield gg, gp, ident_p


def test_sequence_replays_to_source(ensemble):
    count = 0
    for gg, gp, ident_p in _inverse_cases(ensemble):
        g, cg = gg.graph, gg.check_graph
        steps = transform_sequence(gp, g, cg, ident_p, gg.identification)
        n_high = sum(1 for b in g.bit_nodes if g.degree(b) > 3)
        assert sum(1 for s in steps if s.kind == DE) == n_high
        consumed = sum(s.x for s in steps)
        assert consumed == sum(g.degree(b) - 3 for b in g.bit_nodes if g.degree(b) > 3)
        h, ident_h = replay(gp, steps, cg, ident_p)
        assert same_up_to_bit_names(h, g)
        assert h.n == g.n
        # every DS bit keeps its source name
        for s in steps:
            if s.kind in (DS1, DS2):
                assert h.neighborhood(s.added) == g.neighborhood(s.added)
        count += 1
    assert count >= 30


@pytest.fixture()
def octa():
    cg = stacked_octahedron()
    gp, _ = full_inverse(cg, {})
    ident = {f"f{i + 1}": Identification("face", i) for i in range(len(cg.faces))}
    return cg, gp, ident


def test_ds1_and_ds2(octa):
    cg, gp, ident = octa
    h, it = apply_step(gp, TransformStep(DS1, "f1", "x", 7), cg, ident)
    assert h.neighborhood("x") == {7} and "f1" not in h.bit_index
    e = cg.edges_between(1, 2)[0]
    h2, it2 = apply_step(h, TransformStep(DS2, "f2", "y", e), cg, it)
    assert h2.neighborhood("y") == {1, 2}
    assert it2["y"] == Identification("edge", e)


def test_de_consumes_freed_face(octa):
    cg, gp, ident = octa
    a = face_with_corners(cg, {7, 1, 2})
    b = face_with_corners(cg, {7, 2, 3})
    name_a, name_b = f"f{a + 1}", f"f{b + 1}"
    h, it = apply_step(gp, TransformStep(DS1, name_b, "x", 4), cg, ident)
    h, it = apply_step(h, TransformStep(DE, name_a, faces=(b,)), cg, it)
    assert h.neighborhood(name_a) == {7, 1, 2, 3}
    assert it[name_a].kind == "faces"


def test_invalid_steps(octa):
    cg, gp, ident = octa
    with pytest.raises(InvalidStep):
        apply_step(gp, TransformStep(DS1, "nope", "x", 7), cg, ident)
    with pytest.raises(InvalidStep):
        apply_step(gp, TransformStep(DS1, "f1", "f2", 7), cg, ident)
    with pytest.raises(InvalidStep):
        apply_step(gp, TransformStep(DS1, "f1", "x", 99), cg, ident)
    with pytest.raises(InvalidStep):
        apply_step(gp, TransformStep(DS2, "f1", "x", 10 ** 6), cg, ident)
    # the face is still occupied
    with pytest.raises(InvalidStep):
        apply_step(gp, TransformStep(DE, "f1", faces=(cg.edge_faces[cg.faces[0].boundary[0] >> 1][1],)), cg, ident)
    with pytest.raises(InvalidStep):
        apply_step(gp, TransformStep("XX", "f1"), cg, ident)


def test_de_rejects_disconnected_faces(octa):
    cg, gp, ident = octa
    a = face_with_corners(cg, {7, 1, 2})
    far = face_with_corners(cg, {6, 4, 3})
    h, it = apply_step(gp, TransformStep(DS1, f"f{far + 1}", "x", 4), cg, ident)
    with pytest.raises(InvalidStep):
        apply_step(h, TransformStep(DE, f"f{a + 1}", faces=(far,)), cg, it)


def test_sequence_rejects_degree0():
    cg = stacked_octahedron()
    gp, _ = full_inverse(cg, {})
    nb = {b: sorted(gp.neighborhood(b)) for b in gp.bit_nodes}
    nb["z"] = []
    g = TannerGraph.from_neighborhoods(nb, gp.check_nodes)
    gp2 = TannerGraph.from_neighborhoods({**{b: sorted(gp.neighborhood(b)) for b in gp.bit_nodes}, "w": [1]},
                                         gp.check_nodes)
    ident = {f"f{i + 1}": Identification("face", i) for i in range(len(cg.faces))}
    with pytest.raises(ContractViolation):
        transform_sequence(gp2, g, cg, {**ident, "w": Identification("node", 1)}, ident)

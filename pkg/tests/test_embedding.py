from __future__ import annotations

import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planartanner import embedding as emb_mod
from planartanner.embedding import (
    Embedding,
    MapBuilder,
    RotationSystem,
    is_maximal_planar,
    is_planar,
    triangulate_maximal,
)
from planartanner.errors import InvalidArgument, NonPlanarError


def _k(n):
    return [(u, v) for u, v in itertools.combinations(range(n), 2)]


def test_k4_faces_and_euler():
    e = emb_mod.test_planarity(range(4), _k(4))
    assert e.genus() == 0
    assert len(e.faces) == 4
    assert e.euler_characteristic() == 2
    assert is_maximal_planar(e)
    assert e.faces[0].is_outer and not any(f.is_outer for f in e.faces[1:])


@pytest.mark.parametrize("kind,vertices,edges", [
    ("K5", range(5), _k(5)),
    ("K3,3", range(6), [(a, b) for a in range(3) for b in range(3, 6)]),
])
def test_kuratowski_certificate(kind, vertices, edges):
    with pytest.raises(NonPlanarError) as info:
        emb_mod.test_planarity(vertices, edges)
    err = info.value
    assert err.kind == kind
    sub = nx.Graph([edges[i] for i in err.edges])
    assert not nx.check_planarity(sub)[0]


def test_certificate_edges_are_original_indices_with_parallels():
    # K3,3 plus a parallel copy of one edge: certificate must use valid indices
    edges = [(a, b) for a in range(3) for b in range(3, 6)] + [(0, 3)]
    with pytest.raises(NonPlanarError) as info:
        emb_mod.test_planarity(range(6), edges)
    assert all(0 <= i < len(edges) for i in info.value.edges)


def test_parallel_edges_embed():
    e = emb_mod.test_planarity([1, 2, 3], [(1, 2), (1, 2), (2, 3), (3, 1)])
    assert e.genus() == 0
    assert e.n_edges == 4
    assert len(e.faces) == 3


def test_loop_and_unknown_vertex_rejected():
    with pytest.raises(InvalidArgument):
        emb_mod.test_planarity([1, 2], [(1, 1)])
    with pytest.raises(InvalidArgument):
        emb_mod.test_planarity([1, 2], [(1, 3)])


def test_rotation_validation():
    with pytest.raises(InvalidArgument):
        RotationSystem((1, 2, 3), ((1, (0,)),))
    with pytest.raises(InvalidArgument):
        RotationSystem((1, 2), ((1, (0,)), (2, (0,))))
    with pytest.raises(InvalidArgument):
        RotationSystem((1, 2), ((1, (0,)),))


def test_from_faces_round_trip():
    e = emb_mod.test_planarity(range(5), [(0, 1), (1, 2), (2, 0), (0, 3), (3, 1), (1, 4), (4, 2)])
    walks = [f.corners for f in e.faces]
    again = Embedding.from_faces(walks, vertices=e.vertices)
    assert sorted(sorted(map(str, f.corners)) for f in again.faces) == sorted(sorted(map(str, w)) for w in walks)
    assert again.edge_multiset() == e.edge_multiset()


def test_from_faces_rejects_one_sided_edge():
    with pytest.raises(InvalidArgument):
        Embedding.from_faces([(1, 2, 3)])


def _random_planar_graph(rng, n):
    # random subgraph of a random maximal planar graph
    pts = list(range(n))
    g = nx.Graph()
    g.add_nodes_from(pts)
    order = pts[:]
    rng.shuffle(order)
    for u, v in itertools.combinations(order, 2):
        g.add_edge(u, v)
        if not nx.check_planarity(g)[0]:
            g.remove_edge(u, v)
    edges = [e for e in g.edges() if rng.random() < 0.7]
    return pts, edges


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 10), st.integers(0, 10 ** 6))
def test_random_planar_euler(n, seed):
    rng = random.Random(seed)
    vertices, edges = _random_planar_graph(rng, n)
    e = emb_mod.test_planarity(vertices, edges)
    comps = len(emb_mod.components(e.rotation))
    # V - E + F = 1 + C for a plane map with C components (isolated vertices count)
    assert e.genus() == 0
    assert e.n_vertices - e.n_edges + len(e.faces) == 1 + comps
    t = triangulate_maximal(e)
    assert is_maximal_planar(t)
    assert t.n_edges == 3 * n - 6
    # original edges keep their ids and endpoints
    for i, (u, v) in enumerate(edges):
        assert set(t.rotation.edge(i)) == {u, v}


def test_is_planar_agrees_with_networkx():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(4, 8)
        edges = [p for p in itertools.combinations(range(n), 2) if rng.random() < 0.55]
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from(edges)
        assert is_planar(range(n), edges) == nx.check_planarity(g)[0]


def test_map_builder_add_remove():
    b = MapBuilder()
    for v in (1, 2, 3):
        b.add_vertex(v)
    e0 = b.add_edge(1, 2)
    b.add_edge(2, 3)
    b.add_edge(3, 1)
    assert sorted(len(w) for w in b.face_walks()) == [3, 3]
    b.remove_edge(e0)
    assert [len(w) for w in b.face_walks()] == [4]
    rot, remap = b.freeze()
    assert rot.n_edges == 2
    assert Embedding(rot).genus() == 0


def test_nonplanar_rotation_has_positive_genus():
    # K5 always has genus >= 1 under any rotation
    rng = random.Random(1)
    edges = _k(5)
    tails = [x for e in edges for x in e]
    for _ in range(10):
        at = {v: [d for d in range(len(tails)) if tails[d] == v] for v in range(5)}
        for ds in at.values():
            rng.shuffle(ds)
        e = Embedding(RotationSystem(tuple(tails), tuple(at.items())))
        assert e.genus() >= 1

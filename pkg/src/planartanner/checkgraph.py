"""Check graphs of planar Tanner graphs and check inverses.

The check graph is built on a single mutable map that holds the Tanner
graph and the new check-check edges at once. Each new edge is drawn
hugging the path ``c_i - b - c_{i+1}`` through one angular sector of a bit
``b``, so its position in the rotation at ``c_i`` and ``c_{i+1}`` is fixed by
the Tanner embedding. Bits are then deleted, digon faces are collapsed,
and what remains is triangulated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .embedding import (
    Embedding,
    MapBuilder,
    RotationSystem,
    is_maximal_planar,
    sort_key,
    test_planarity,
    triangulate_face,
)
from .errors import ContractViolation, InvalidArgument, UnsupportedRate, UnsupportedSize
from .tanner import TannerGraph

STEP1 = "step1"
STEP3 = "step3"


@dataclass(frozen=True)
class Identification:
    """Where a bit node lives in the check graph.

    ``kind`` is one of ``"face"`` (degree 3, ``target`` a face id),
    ``"faces"`` (degree > 3, ``target`` a tuple of face ids), ``"edge"``
    (degree 2, an edge id), ``"node"`` (degree 1, a check id) or ``"none"``
    (degree 0).
    """

    kind: str
    target: object

    @property
    def faces(self) -> tuple:
        if self.kind == "face":
            return (self.target,)
        if self.kind == "faces":
            return tuple(self.target)
        return ()


class CheckGraph:
    """Maximal planar multigraph on the check nodes."""

    def __init__(self, embedding: Embedding, origin: Optional[Iterable[str]] = None):
        self.embedding = embedding
        self.origin = tuple(origin) if origin is not None else (STEP1,) * embedding.n_edges
        if len(self.origin) != embedding.n_edges:
            raise InvalidArgument("origin must label every edge")
        m = embedding.n_vertices
        if m < 3:
            raise UnsupportedSize("check graph needs at least 3 check nodes")
        if not is_maximal_planar(embedding):
            raise ContractViolation("check graph is not maximal planar")

    def __repr__(self):
        return f"CheckGraph(m={self.m}, E={self.embedding.n_edges}, F={len(self.faces)})"

    @property
    def m(self) -> int:
        return self.embedding.n_vertices

    @property
    def vertices(self) -> tuple:
        return self.embedding.vertices

    @property
    def faces(self):
        return self.embedding.faces

    @property
    def edges(self) -> tuple:
        return self.embedding.edges

    @cached_property
    def face_corners(self) -> tuple:
        """``V^c(f)`` per face id."""
        return tuple(f.vertex_set for f in self.faces)

    def vc(self, faces: Iterable[int]) -> frozenset:
        """Union of face corner sets."""
        out: set = set()
        for f in faces:
            out |= self.face_corners[f]
        return frozenset(out)

    @cached_property
    def edge_faces(self) -> tuple:
        """Per edge, the faces on the side of dart ``2e`` and dart ``2e+1``."""
        fd = self.embedding.face_of_dart
        return tuple((fd[2 * e], fd[2 * e + 1]) for e in range(self.embedding.n_edges))

    def edges_between(self, u, v) -> list[int]:
        return [e for e, (a, b) in enumerate(self.edges) if {a, b} == {u, v}]

    def canonical_faces(self) -> frozenset:
        """Oriented corner cycles, rotated to start at their lowest vertex."""
        out = []
        for f in self.faces:
            c = list(f.corners)
            i = min(range(len(c)), key=lambda j: sort_key(c[j]))
            out.append(tuple(c[i:] + c[:i]))
        return frozenset(out)

    def same_structure(self, other: "CheckGraph") -> bool:
        """Equal edge multisets and equal oriented faces, up to a global mirror."""
        if self.embedding.edge_multiset() != other.embedding.edge_multiset():
            return False
        mine = self.canonical_faces()
        if mine == other.canonical_faces():
            return True
        mirrored = []
        for f in other.faces:
            c = list(reversed(f.corners))
            i = min(range(len(c)), key=lambda j: sort_key(c[j]))
            mirrored.append(tuple(c[i:] + c[:i]))
        return mine == frozenset(mirrored)


@dataclass
class OccupancyTable:
    edge_bits: dict = field(default_factory=dict)  # edge id -> degree-2 bits
    node_bits: dict = field(default_factory=dict)  # check -> degree-1 bits

    @property
    def occupied_edges(self) -> frozenset:
        return frozenset(e for e, bs in self.edge_bits.items() if bs)

    @property
    def occupied_nodes(self) -> frozenset:
        return frozenset(c for c, bs in self.node_bits.items() if bs)

    def edge_multiplicity(self, e: int) -> int:
        return len(self.edge_bits.get(e, ()))

    def node_multiplicity(self, c) -> int:
        return len(self.node_bits.get(c, ()))


class IdentificationMap(dict):
    """``bit -> Identification`` with inverse lookups."""

    def face_bits(self) -> dict:
        out: dict = {}
        for b, ident in self.items():
            for f in ident.faces:
                out.setdefault(f, []).append(b)
        return out

    def occupancy(self) -> OccupancyTable:
        occ = OccupancyTable()
        for b, ident in self.items():
            if ident.kind == "edge":
                occ.edge_bits.setdefault(ident.target, []).append(b)
            elif ident.kind == "node":
                occ.node_bits.setdefault(ident.target, []).append(b)
        return occ


def tanner_embedding(g: TannerGraph) -> Embedding:
    """Default embedding of a Tanner graph from the planarity test."""
    return test_planarity(list(g.bit_nodes) + list(g.check_nodes), g.edges)


def _validate_tanner_embedding(g: TannerGraph, emb: Embedding) -> None:
    if tuple(emb.edges) != tuple(g.edges):
        raise InvalidArgument("embedding edges must match the Tanner graph edge list")
    if set(emb.vertices) != set(g.bit_nodes) | set(g.check_nodes):
        raise InvalidArgument("embedding vertices must be the Tanner graph nodes")
    if emb.genus() != 0:
        tanner_embedding(g)  # raises NonPlanarError when no planar embedding exists
        raise InvalidArgument("the supplied rotation system is not planar")


def build_check_graph(g: TannerGraph, emb: Optional[Embedding] = None
                      ) -> tuple[CheckGraph, IdentificationMap, OccupancyTable]:
    """Check graph, identification map and occupancy of a planar Tanner graph."""
    if g.m < 3:
        raise UnsupportedSize("check graph needs at least 3 check nodes")
    if emb is None:
        emb = tanner_embedding(g)
    else:
        _validate_tanner_embedding(g, emb)

    builder = MapBuilder(emb.rotation)
    tails = builder.tails

    # Step 1: one hugging edge per angular sector of every bit of degree > 1.
    sector_edges: dict = {}
    for b in g.bit_nodes:
        darts = list(builder.rot[b])
        lam = len(darts)
        if lam < 2:
            continue
        edges_b = []
        for i in range(lam):
            d_i, d_next = darts[i], darts[(i + 1) % lam]
            c_i, c_next = tails[d_i ^ 1], tails[d_next ^ 1]
            e = builder.add_edge(c_i, c_next, u_before=d_i ^ 1, v_after=d_next ^ 1)
            edges_b.append(e)
        sector_edges[b] = edges_b

    for b in g.bit_nodes:
        builder.remove_vertex(b)

    # Components are joined before digons collapse, away from faces holding
    # a bit; empty digons are avoided when possible so they still collapse.
    first_step3 = len(builder.alive)
    walks = builder.face_walks()
    walk_of = {d: i for i, w in enumerate(walks) for d in w}
    busy = {walk_of[2 * e + 1] for es in sector_edges.values() if len(es) >= 3 for e in es}
    claimed = {d for i in busy for d in walks[i]}
    digon_darts = {d for w in walks if len(w) == 2 for d in w}
    builder.connect_components(corner_ok=lambda d: d not in claimed and d not in digon_darts,
                               fallback=lambda d: d not in claimed)

    # Step 2: collapse faces bounded by two distinct edges, keeping the older edge.
    dart_repl: dict = {}
    edge_repl: dict = {}
    while True:
        digon = next((w for w in builder.face_walks() if len(w) == 2 and w[0] >> 1 != w[1] >> 1), None)
        if digon is None:
            break
        d1, d2 = digon
        if d1 >> 1 < d2 >> 1:
            d1, d2 = d2, d1
        builder.remove_edge(d1 >> 1)
        dart_repl[d1 ^ 1] = d2
        edge_repl[d1 >> 1] = d2 >> 1

    def resolve_dart(d):
        while d in dart_repl:
            d = dart_repl[d]
        return d

    def resolve_edge(e):
        while e in edge_repl:
            e = edge_repl[e]
        return e

    walks = builder.face_walks()
    walk_of = {d: i for i, w in enumerate(walks) for d in w}
    region: dict = {}
    for b, edges_b in sector_edges.items():
        if len(edges_b) < 3:
            continue
        ws = {walk_of[resolve_dart(2 * e + 1)] for e in edges_b}
        if len(ws) != 1 or len(walks[next(iter(ws))]) != len(edges_b):
            raise ContractViolation(f"bit {b!r} does not sit in a face bounded by its own cycle")
        region[b] = next(iter(ws))

    # Step 3: triangulate every face longer than 3.
    region_darts = {b: set(walks[walk_of[resolve_dart(2 * sector_edges[b][0] + 1)]]) for b in region}
    for w in walks:
        if len(w) <= 3:
            continue
        added = triangulate_face(builder, w)
        inside = set(w) | {2 * e for e in added} | {2 * e + 1 for e in added}
        for b, ds in region_darts.items():
            if ds & set(w):
                ds |= inside

    rot, remap = builder.freeze()
    rot = RotationSystem(rot.tails, tuple(sorted(rot.rotation, key=lambda p: g.check_index[p[0]])))
    origin = [STEP1 if old < first_step3 else STEP3 for old in sorted(remap)]
    cg = CheckGraph(Embedding(rot), origin)

    def new_dart(d):
        return 2 * remap[d >> 1] + (d & 1)

    fd = cg.embedding.face_of_dart
    ident = IdentificationMap()
    for b in g.bit_nodes:
        lam = g.degree(b)
        if lam == 0:
            ident[b] = Identification("none", None)
        elif lam == 1:
            ident[b] = Identification("node", next(iter(g.neighborhood(b))))
        elif lam == 2:
            ident[b] = Identification("edge", remap[resolve_edge(sector_edges[b][0])])
        else:
            faces = sorted({fd[new_dart(d)] for d in region_darts[b]})
            if lam == 3:
                ident[b] = Identification("face", faces[0])
            else:
                ident[b] = Identification("faces", tuple(faces))
    check_identification(g, cg, ident)
    return cg, ident, ident.occupancy()


def check_identification(g: TannerGraph, cg: CheckGraph, ident: Mapping) -> None:
    """Assert that ``cg`` is a valid check graph of ``g`` under ``ident``."""
    used_faces: dict = {}
    for b in g.bit_nodes:
        if b not in ident:
            raise ContractViolation(f"bit {b!r} has no identification")
        it = ident[b]
        nb = g.neighborhood(b)
        lam = len(nb)
        if it.kind == "none":
            ok = lam == 0
        elif it.kind == "node":
            ok = lam == 1 and nb == {it.target}
        elif it.kind == "edge":
            ok = lam == 2 and set(cg.edges[it.target]) == set(nb)
        elif it.kind in ("face", "faces"):
            faces = it.faces
            ok = (lam >= 3 and len(faces) == lam - 2 and cg.vc(faces) == nb
                  and _dual_connected(cg, faces))
            for f in faces:
                if f in used_faces:
                    raise ContractViolation(f"face {f} claimed by {used_faces[f]!r} and {b!r}")
                used_faces[f] = b
        else:
            ok = False
        if not ok:
            raise ContractViolation(f"identification of bit {b!r} is inconsistent with the check graph")


def _dual_connected(cg: CheckGraph, faces: Iterable[int]) -> bool:
    faces = set(faces)
    if not faces:
        return False
    start = next(iter(faces))
    seen = {start}
    stack = [start]
    while stack:
        f = stack.pop()
        for a, b in cg.edge_faces:
            for x, y in ((a, b), (b, a)):
                if x == f and y in faces and y not in seen:
                    seen.add(y)
                    stack.append(y)
    return seen == faces


def region_boundary(cg: CheckGraph, faces: Iterable[int]) -> list[int]:
    """Boundary darts of a union of faces, in traversal order (single cycle)."""
    faces = set(faces)
    fd = cg.embedding.face_of_dart
    rot = cg.embedding.rotation
    boundary = [d for f in sorted(faces) for d in cg.faces[f].boundary if fd[d ^ 1] not in faces]
    if not boundary:
        raise InvalidArgument("region has no boundary")
    start = boundary[0]
    walk = [start]
    d = start
    while True:
        x = rot.face_next(d)
        while fd[x ^ 1] in faces:
            x = rot.face_next(x ^ 1)
        if x == start:
            break
        walk.append(x)
        d = x
        if len(walk) > len(boundary):
            raise InvalidArgument("region boundary is not a single cycle")
    if len(walk) != len(boundary):
        raise InvalidArgument("region boundary is not a single cycle")
    return walk


def place_bits(cg: CheckGraph, bits: Mapping[object, Identification], bit_order: Optional[Iterable] = None
               ) -> tuple[TannerGraph, Embedding]:
    """Planar Tanner graph whose check graph is ``cg`` with the given identifications.

    Bits identified with faces sit inside their face (or inside the disc
    formed by a face fan); degree-2 bits hug their edge; degree-1 bits are
    attached at their check.
    """
    order = list(bit_order) if bit_order is not None else list(bits)
    builder = MapBuilder(cg.embedding.rotation)
    n_cg_edges = cg.embedding.n_edges
    created: dict = {b: [] for b in order}

    for b in order:
        it = bits[b]
        if it.kind not in ("face", "faces"):
            continue
        walk = region_boundary(cg, it.faces)
        if it.kind == "faces":
            inner = {e for f in it.faces for d in cg.faces[f].boundary
                     for e in [d >> 1] if cg.edge_faces[e][0] in it.faces and cg.edge_faces[e][1] in it.faces}
            for e in sorted(inner):
                builder.remove_edge(e)
        for d in reversed(walk):
            c = cg.embedding.rotation.tails[d]
            created[b].append((c, builder.add_edge(b, c, v_before=d)))
    for b in order:
        it = bits[b]
        if it.kind == "edge":
            e = it.target
            u, v = cg.edges[e]
            if not builder.alive[e]:
                raise InvalidArgument(f"degree-2 bit {b!r} sits on an edge inside a fan region")
            created[b].append((u, builder.add_edge(b, u, v_before=2 * e)))
            created[b].append((v, builder.add_edge(b, v, v_after=2 * e + 1)))
        elif it.kind == "node":
            c = it.target
            first = builder.rot[c][0] if builder.rot[c] else None
            created[b].append((c, builder.add_edge(b, c, v_before=first)))
        elif it.kind == "none":
            builder.add_vertex(b)
    for e in range(n_cg_edges):
        if builder.alive[e]:
            builder.remove_edge(e)
    rot, remap = builder.freeze()
    edges = []
    for b in order:
        for c, e in created[b]:
            edges.append((b, c, remap[e]))
    # renumber edges so that the Tanner edge list order matches dart ids
    by_new = sorted(edges, key=lambda t: t[2])
    g = TannerGraph(tuple(order), tuple(cg.vertices), tuple((b, c) for b, c, _ in by_new))
    vorder = {v: i for i, v in enumerate(list(order) + list(cg.vertices))}
    rot = RotationSystem(rot.tails, tuple(sorted(rot.rotation, key=lambda p: vorder[p[0]])))
    return g, Embedding(rot)


def _face_bit_names(g: TannerGraph, count: int) -> list:
    taken = set(g.bit_nodes)
    names = []
    for i in range(count):
        name = f"f{i + 1}"
        while name in taken:
            name = "_" + name
        taken.add(name)
        names.append(name)
    return names


def check_inverse_placement(g: TannerGraph, cg: CheckGraph, ident: Mapping) -> dict:
    """Identifications of the check inverse's bits (face bits first)."""
    if g.design_rate <= 0.5:
        raise UnsupportedRate("check inverse requires design rate > 1/2")
    n_faces = len(cg.faces)
    keep = max(g.n - n_faces, 0)
    low = [b for b in g.bit_nodes if g.degree(b) in (1, 2)]
    if len(low) < keep:
        raise ContractViolation("not enough degree-1/2 bits to fill the check inverse")
    placement: dict = {}
    for f, name in enumerate(_face_bit_names(g, n_faces)):
        placement[name] = Identification("face", f)
    for b in low[:keep]:
        placement[b] = ident[b]
    return placement


def build_check_inverse(g: TannerGraph, cg: CheckGraph, ident: Mapping) -> TannerGraph:
    """Check inverse: one degree-3 bit per face plus the lowest-id low-degree bits."""
    placement = check_inverse_placement(g, cg, ident)
    nbrs = {}
    for b, it in placement.items():
        if it.kind == "face":
            f = cg.faces[it.target]
            # corner order of the face keeps neighbour lists deterministic
            nbrs[b] = list(dict.fromkeys(f.corners))
        else:
            nbrs[b] = sorted(g.neighborhood(b), key=lambda c: g.check_index[c])
    return TannerGraph.from_neighborhoods(nbrs, g.check_nodes)


def check_inverse_with_embedding(g: TannerGraph, cg: CheckGraph, ident: Mapping
                                 ) -> tuple[TannerGraph, Embedding, IdentificationMap]:
    placement = check_inverse_placement(g, cg, ident)
    gp, emb = place_bits(cg, placement)
    return gp, emb, IdentificationMap(placement)

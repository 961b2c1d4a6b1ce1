"""Combinatorial planar embeddings.

Edges are numbered ``0..E-1``; edge ``k`` owns dart ``2k`` (first endpoint to
second) and dart ``2k+1`` (reverse), so the dart involution is ``d ^ 1``.
A rotation system lists, per vertex, the cyclic order of outgoing darts. The
face to the left of dart ``d`` continues with ``succ(d ^ 1)``, the successor of
the reversed dart in the rotation at its tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Optional, Sequence

import networkx as nx

from .errors import InvalidArgument, NonPlanarError

Vertex = Hashable


def sort_key(v):
    """Total order on mixed int/str ids: ints first, then by string."""
    if isinstance(v, bool):
        return (1, 0, str(v))
    if isinstance(v, int):
        return (0, v, "")
    return (1, 0, str(v))


@dataclass(frozen=True)
class Face:
    id: int
    boundary: tuple  # darts, in face-traversal order
    corners: tuple  # tail vertex of each boundary dart
    is_outer: bool = False

    @property
    def length(self) -> int:
        return len(self.boundary)

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.corners)


@dataclass(frozen=True, eq=False)
class RotationSystem:
    """Dart tails plus per-vertex cyclic dart order.

    ``rotation`` is a tuple of ``(vertex, darts)`` pairs; isolated vertices
    carry an empty tuple.
    """

    tails: tuple
    rotation: tuple

    def __post_init__(self):
        object.__setattr__(self, "tails", tuple(self.tails))
        rot = self.rotation.items() if isinstance(self.rotation, dict) else self.rotation
        object.__setattr__(self, "rotation", tuple((v, tuple(ds)) for v, ds in rot))
        if len(self.tails) % 2:
            raise InvalidArgument("dart count must be even (every edge has two darts)")
        seen = set()
        verts = set()
        for v, ds in self.rotation:
            if v in verts:
                raise InvalidArgument(f"vertex {v!r} listed twice in rotation")
            verts.add(v)
            for d in ds:
                if not 0 <= d < len(self.tails):
                    raise InvalidArgument(f"unknown dart {d}")
                if d in seen:
                    raise InvalidArgument(f"dart {d} appears twice")
                if self.tails[d] != v:
                    raise InvalidArgument(f"dart {d} listed at {v!r} but its tail is {self.tails[d]!r}")
                seen.add(d)
        if len(seen) != len(self.tails):
            raise InvalidArgument("some darts are missing from the rotation")

    def __eq__(self, other):
        if not isinstance(other, RotationSystem):
            return NotImplemented
        return self.tails == other.tails and self.rotation == other.rotation

    def __hash__(self):
        return hash((self.tails, self.rotation))

    @property
    def n_darts(self) -> int:
        return len(self.tails)

    @property
    def n_edges(self) -> int:
        return len(self.tails) // 2

    @cached_property
    def vertices(self) -> tuple:
        return tuple(v for v, _ in self.rotation)

    @cached_property
    def darts_at(self) -> dict:
        return dict(self.rotation)

    @cached_property
    def succ(self) -> tuple:
        out = [0] * len(self.tails)
        for _, ds in self.rotation:
            for i, d in enumerate(ds):
                out[d] = ds[(i + 1) % len(ds)]
        return tuple(out)

    def head(self, d: int) -> Vertex:
        return self.tails[d ^ 1]

    def face_next(self, d: int) -> int:
        return self.succ[d ^ 1]

    def edge(self, e: int) -> tuple:
        return self.tails[2 * e], self.tails[2 * e + 1]

    def degree(self, v) -> int:
        return len(self.darts_at[v])


def trace_faces(rotation: RotationSystem) -> list[Face]:
    """Partition darts into faces; face ``0`` (holding dart 0) is flagged outer."""
    seen = [False] * rotation.n_darts
    faces = []
    for start in range(rotation.n_darts):
        if seen[start]:
            continue
        walk = []
        d = start
        while not seen[d]:
            seen[d] = True
            walk.append(d)
            d = rotation.face_next(d)
        if d != start:
            raise InvalidArgument("inconsistent rotation: face tracing did not close")
        faces.append(Face(len(faces), tuple(walk), tuple(rotation.tails[x] for x in walk), len(faces) == 0))
    return faces


def components(rotation: RotationSystem) -> list[list]:
    adj = {v: set() for v in rotation.vertices}
    for d in range(0, rotation.n_darts, 2):
        u, v = rotation.tails[d], rotation.tails[d + 1]
        adj[u].add(v)
        adj[v].add(u)
    out, seen = [], set()
    for v in rotation.vertices:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(comp)
    return out


def genus(rotation: RotationSystem) -> int:
    """Sum over connected components of ``(2 - V + E - F) / 2``."""
    faces = trace_faces(rotation)
    face_of = {}
    for f in faces:
        for d in f.boundary:
            face_of[d] = f.id
    total = 0
    for comp in components(rotation):
        cset = set(comp)
        darts = [d for d in range(rotation.n_darts) if rotation.tails[d] in cset]
        n_faces = max(len({face_of[d] for d in darts}), 1)
        total += 2 - len(comp) + len(darts) // 2 - n_faces
    return total // 2


class Embedding:
    """A loopless multigraph together with a rotation system."""

    def __init__(self, rotation: RotationSystem):
        for d in range(0, rotation.n_darts, 2):
            if rotation.tails[d] == rotation.tails[d + 1]:
                raise InvalidArgument(f"loop at {rotation.tails[d]!r} is not allowed")
        self.rotation = rotation

    def __repr__(self):
        return f"Embedding(V={self.n_vertices}, E={self.n_edges}, F={len(self.faces)})"

    @property
    def vertices(self) -> tuple:
        return self.rotation.vertices

    @property
    def n_vertices(self) -> int:
        return len(self.rotation.vertices)

    @property
    def n_edges(self) -> int:
        return self.rotation.n_edges

    @cached_property
    def edges(self) -> tuple:
        return tuple(self.rotation.edge(e) for e in range(self.n_edges))

    @cached_property
    def faces(self) -> list[Face]:
        return trace_faces(self.rotation)

    @cached_property
    def face_of_dart(self) -> tuple:
        out = [0] * self.rotation.n_darts
        for f in self.faces:
            for d in f.boundary:
                out[d] = f.id
        return tuple(out)

    def genus(self) -> int:
        return genus(self.rotation)

    def is_connected(self) -> bool:
        return len(components(self.rotation)) <= 1

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + len(self.faces)

    def edge_multiset(self) -> list:
        return sorted(tuple(sorted((u, v), key=sort_key)) for u, v in self.edges)

    @classmethod
    def from_faces(cls, faces: Sequence[Sequence], labels: Optional[Sequence[Sequence]] = None,
                   vertices: Optional[Iterable] = None) -> "Embedding":
        """Rebuild an embedding from consistently oriented face walks.

        Every undirected edge must be traversed once in each direction. For
        multigraphs ``labels[i][j]`` names the edge from ``faces[i][j]`` to
        its successor so parallel edges can be told apart.
        """
        edge_ids: dict = {}
        tails: list = []
        dart_of: dict = {}
        walks = []
        for i, walk in enumerate(faces):
            darts = []
            k = len(walk)
            for j in range(k):
                u, v = walk[j], walk[(j + 1) % k]
                lab = labels[i][j] if labels is not None else 0
                key = (frozenset((u, v)), lab)
                if key not in edge_ids:
                    edge_ids[key] = len(edge_ids)
                    tails.extend([u, v])
                e = edge_ids[key]
                d = 2 * e if tails[2 * e] == u else 2 * e + 1
                if d in dart_of:
                    raise InvalidArgument(f"dart {u!r}->{v!r} traversed twice")
                dart_of[d] = (i, j)
                darts.append(d)
            walks.append(darts)
        if len(dart_of) != len(tails):
            raise InvalidArgument("some edge is traversed in only one direction")
        succ = {}
        for darts in walks:
            k = len(darts)
            for j in range(k):
                succ[darts[j] ^ 1] = darts[(j + 1) % k]
        order = list(vertices) if vertices is not None else []
        for t in tails:
            if t not in order:
                order.append(t)
        at: dict = {v: [] for v in order}
        for d in range(len(tails)):
            at[tails[d]].append(d)
        rotation = []
        for v in order:
            ds = at[v]
            if not ds:
                rotation.append((v, ()))
                continue
            cyc = [min(ds)]
            while True:
                nxt = succ[cyc[-1]]
                if nxt == cyc[0]:
                    break
                cyc.append(nxt)
            if len(cyc) != len(ds):
                raise InvalidArgument(f"faces around {v!r} do not close into one disc")
            rotation.append((v, tuple(cyc)))
        return cls(RotationSystem(tuple(tails), tuple(rotation)))


class MapBuilder:
    """Mutable rotation system for incremental construction.

    Removed edges leave holes in the dart numbering until :meth:`freeze`,
    which renumbers surviving edges in order.
    """

    def __init__(self, rotation: Optional[RotationSystem] = None):
        self.tails: list = []
        self.rot: dict = {}
        self.alive: list[bool] = []
        if rotation is not None:
            self.tails = list(rotation.tails)
            self.rot = {v: list(ds) for v, ds in rotation.rotation}
            self.alive = [True] * rotation.n_edges

    def add_vertex(self, v) -> None:
        self.rot.setdefault(v, [])

    def _insert(self, v, dart: int, before: Optional[int], after: Optional[int]) -> None:
        lst = self.rot[v]
        if before is not None:
            lst.insert(lst.index(before), dart)
        elif after is not None:
            lst.insert(lst.index(after) + 1, dart)
        else:
            lst.append(dart)

    def add_edge(self, u, v, *, u_before=None, u_after=None, v_before=None, v_after=None) -> int:
        """Add edge ``u``-``v``; each end goes before/after a given dart or at the end."""
        e = len(self.alive)
        self.tails.extend([u, v])
        self.alive.append(True)
        self.add_vertex(u)
        self.add_vertex(v)
        self._insert(u, 2 * e, u_before, u_after)
        self._insert(v, 2 * e + 1, v_before, v_after)
        return e

    def remove_edge(self, e: int) -> None:
        if not self.alive[e]:
            raise InvalidArgument(f"edge {e} already removed")
        self.alive[e] = False
        self.rot[self.tails[2 * e]].remove(2 * e)
        self.rot[self.tails[2 * e + 1]].remove(2 * e + 1)

    def remove_vertex(self, v) -> None:
        for d in list(self.rot[v]):
            if self.alive[d // 2]:
                self.remove_edge(d // 2)
        del self.rot[v]

    def succ(self, d: int) -> int:
        lst = self.rot[self.tails[d]]
        return lst[(lst.index(d) + 1) % len(lst)]

    def pred(self, d: int) -> int:
        lst = self.rot[self.tails[d]]
        return lst[lst.index(d) - 1]

    def face_walks(self) -> list[list[int]]:
        seen = set()
        out = []
        for e, ok in enumerate(self.alive):
            if not ok:
                continue
            for start in (2 * e, 2 * e + 1):
                if start in seen:
                    continue
                walk, d = [], start
                while d not in seen:
                    seen.add(d)
                    walk.append(d)
                    d = self.succ(d ^ 1)
                out.append(walk)
        return out

    def freeze(self) -> tuple[RotationSystem, dict]:
        """Return the compacted rotation system and an old->new edge id map."""
        remap = {}
        for e, ok in enumerate(self.alive):
            if ok:
                remap[e] = len(remap)
        tails = [None] * (2 * len(remap))
        for old, new in remap.items():
            tails[2 * new] = self.tails[2 * old]
            tails[2 * new + 1] = self.tails[2 * old + 1]
        rotation = tuple(
            (v, tuple(2 * remap[d // 2] + (d & 1) for d in ds)) for v, ds in self.rot.items()
        )
        return RotationSystem(tuple(tails), rotation), remap

    def components(self) -> list[list]:
        adj = {v: set() for v in self.rot}
        for e, ok in enumerate(self.alive):
            if ok:
                u, v = self.tails[2 * e], self.tails[2 * e + 1]
                adj[u].add(v)
                adj[v].add(u)
        out, seen = [], set()
        for v in sorted(self.rot, key=sort_key):
            if v in seen:
                continue
            comp, stack = [], [v]
            seen.add(v)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            out.append(sorted(comp, key=sort_key))
        return out

    def connect_components(self, corner_ok: Optional[Callable[[int], bool]] = None,
                           fallback: Optional[Callable[[int], bool]] = None) -> list[int]:
        """Join every component to the one holding the lowest vertex id.

        A new dart at vertex ``v`` is placed right before an outgoing dart
        ``d`` of ``v``; ``corner_ok(d)`` may veto that corner. When no corner
        passes, ``fallback`` is tried instead. Returns the added edge ids.
        """
        comps = self.components()
        added = []
        if len(comps) <= 1:
            return added
        tests = [t for t in (corner_ok, fallback) if t is not None] or [lambda d: True]

        def corners(v, ok):
            darts = self.rot[v]
            return [None] if not darts else [d for d in darts if ok(d)]

        base = comps[0]
        for comp in comps[1:]:
            placed = False
            for ok in tests:
                t_choices = [(t, c) for t in comp for c in corners(t, ok)]
                u_choices = [(u, c) for u in base for c in corners(u, ok)]
                if t_choices and u_choices:
                    (u, cu), (t, ct) = u_choices[0], t_choices[0]
                    added.append(self.add_edge(u, t, u_before=cu, v_before=ct))
                    placed = True
                    break
            if not placed:
                raise InvalidArgument("no free corner to attach a component")
            base = base + comp
        return added

    def cut_ear(self, walk: list[int], i: int) -> list[int]:
        """Add chord ``walk[i].tail -> walk[i+2].tail`` inside the face ``walk``.

        Returns the remaining (shorter) face walk; the cut-off triangle is
        ``walk[i], walk[i+1]`` and the new reverse dart.
        """
        k = len(walk)
        d_i, d_i2 = walk[i], walk[(i + 2) % k]
        u, w = self.tails[d_i], self.tails[d_i2]
        e = self.add_edge(u, w, u_before=d_i, v_before=d_i2)
        rest = [walk[(i + j) % k] for j in range(2, k)] + [2 * e]
        return rest


def _edge_exists(builder: MapBuilder, u, v) -> bool:
    for d in builder.rot[u]:
        if builder.tails[d ^ 1] == v:
            return True
    return False


def triangulate_face(builder: MapBuilder, walk: list[int]) -> list[int]:
    """Fan-triangulate one face from its lowest-id vertex; returns added edge ids.

    A chord that would duplicate an existing edge is skipped in favour of
    the next vertex in id order; only if every non-loop chord is parallel is
    a parallel edge accepted.
    """
    added = []
    walk = list(walk)
    while len(walk) > 3:
        k = len(walk)
        tails = [builder.tails[d] for d in walk]
        order = sorted(range(k), key=lambda i: (sort_key(tails[i]), i))
        pick = None
        fallback = None
        for i in order:
            u, w = tails[i], tails[(i + 2) % k]
            if u == w:
                continue
            if fallback is None:
                fallback = i
            if not _edge_exists(builder, u, w):
                pick = i
                break
        if pick is None:
            pick = fallback
        if pick is None:
            raise InvalidArgument("face cannot be triangulated without loops")
        walk = builder.cut_ear(walk, pick)
        added.append(len(builder.alive) - 1)
    return added


def triangulate_maximal(e: Embedding) -> Embedding:
    """Maximal planar completion; new edges get ids ``>= e.n_edges``.

    Components are joined first, then every face longer than 3 is
    fan-triangulated in face order (see :func:`triangulate_face`).
    """
    if e.n_vertices < 3:
        raise InvalidArgument("triangulation needs at least 3 vertices")
    if e.genus() != 0:
        raise InvalidArgument("embedding is not planar")
    builder = MapBuilder(e.rotation)
    builder.connect_components()
    for walk in builder.face_walks():
        if len(walk) > 3:
            triangulate_face(builder, walk)
    rot, _ = builder.freeze()
    return Embedding(rot)


def is_maximal_planar(e: Embedding) -> bool:
    return (
        e.n_vertices >= 3
        and e.is_connected()
        and e.genus() == 0
        and all(f.length == 3 for f in e.faces)
        and e.n_edges == 3 * e.n_vertices - 6
    )


def test_planarity(vertices: Iterable, edges: Sequence[tuple]) -> Embedding:
    """Planar embedding of a loopless multigraph, or :class:`NonPlanarError`.

    Parallel edges are subdivided for the test and merged back. The error
    carries the Kuratowski subgraph as a list of original edge indices.
    """
    vertices = list(vertices)
    vset = set(vertices)
    G = nx.Graph()
    G.add_nodes_from(vertices)
    link: dict = {}  # (v, nx-neighbour) -> dart
    orig_of: dict = {}  # nx edge -> original edge index
    seen_pairs = set()
    for k, (u, v) in enumerate(edges):
        if u == v:
            raise InvalidArgument(f"loop at {u!r}")
        if u not in vset or v not in vset:
            raise InvalidArgument(f"edge ({u!r}, {v!r}) uses an unknown vertex")
        pair = frozenset((u, v))
        if pair in seen_pairs:
            mid = ("__subdivision__", k)
            G.add_edge(u, mid)
            G.add_edge(mid, v)
            link[(u, mid)] = 2 * k
            link[(v, mid)] = 2 * k + 1
            orig_of[frozenset((u, mid))] = k
            orig_of[frozenset((mid, v))] = k
        else:
            seen_pairs.add(pair)
            G.add_edge(u, v)
            link[(u, v)] = 2 * k
            link[(v, u)] = 2 * k + 1
            orig_of[pair] = k
    planar, cert = nx.check_planarity(G, counterexample=True)
    if not planar:
        degs = [d for _, d in cert.degree() if d >= 3]
        kind = "K5" if len(degs) == 5 and all(d == 4 for d in degs) else "K3,3"
        ids = sorted({orig_of[frozenset(e)] for e in cert.edges()})
        raise NonPlanarError(kind, ids)
    tails = []
    for u, v in edges:
        tails.extend([u, v])
    rotation = []
    for v in vertices:
        if G.degree(v) == 0:
            rotation.append((v, ()))
            continue
        rotation.append((v, tuple(link[(v, w)] for w in cert.neighbors_cw_order(v))))
    return Embedding(RotationSystem(tuple(tails), tuple(rotation)))


def is_planar(vertices: Iterable, edges: Sequence[tuple]) -> bool:
    try:
        test_planarity(vertices, edges)
    except NonPlanarError:
        return False
    return True

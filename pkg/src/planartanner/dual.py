"""Dual of a check graph, complete 3-tree combinatorics and recurrence numbers."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Iterable, Mapping, Optional

from .checkgraph import CheckGraph, OccupancyTable
from .errors import ContractViolation, GirthError, InvalidArgument
from .tanner import TannerGraph


class DualGraph:
    """Planar dual of a maximal planar check graph.

    Dual vertex ``f`` is face ``f`` of the check graph and dual edge ``e``
    is the dual of check-graph edge ``e``, so the bijection is the identity
    on ids. ``rotation[f]`` lists the dual edges at ``f`` in face-boundary
    order.
    """

    def __init__(self, cg: CheckGraph):
        faces = cg.faces
        if any(f.length != 3 for f in faces):
            raise ContractViolation("dual requires a triangulated check graph")
        self.cg = cg
        self.n_vertices = len(faces)
        self.edges = cg.edge_faces
        self.rotation = tuple(tuple(d >> 1 for d in f.boundary) for f in faces)
        adj: list[list] = [[] for _ in range(self.n_vertices)]
        for e, (a, b) in enumerate(self.edges):
            adj[a].append((e, b))
            adj[b].append((e, a))
        self.adj = tuple(tuple(x) for x in adj)
        if self.n_vertices != 2 * cg.m - 4 or len(self.edges) != 3 * cg.m - 6:
            raise ContractViolation("dual size does not match 2m-4 vertices and 3m-6 edges")
        if any(len(a) != 3 for a in self.adj):
            raise ContractViolation("dual is not 3-regular")

    def __repr__(self):
        return f"DualGraph(V={self.n_vertices}, E={len(self.edges)})"

    @property
    def vertices(self) -> range:
        return range(self.n_vertices)

    @cached_property
    def neighbors(self) -> tuple:
        return tuple(frozenset(b for _, b in a) for a in self.adj)

    def induced_edges(self, U: Iterable[int]) -> list[int]:
        U = set(U)
        return [e for e, (a, b) in enumerate(self.edges) if a in U and b in U]

    def is_connected_subset(self, U: Iterable[int]) -> bool:
        U = set(U)
        if not U:
            return False
        start = next(iter(U))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.neighbors[x]:
                if y in U and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen == U


def build_dual(cg: CheckGraph) -> DualGraph:
    return DualGraph(cg)


def girth(d: DualGraph) -> int:
    """Shortest cycle length; parallel edges give 2."""
    seen_pairs = set()
    for a, b in d.edges:
        if a == b:
            return 1
        key = (min(a, b), max(a, b))
        if key in seen_pairs:
            return 2
        seen_pairs.add(key)
    best = None
    for s in d.vertices:
        dist = {s: 0}
        parent_edge = {s: None}
        q = deque([s])
        while q:
            x = q.popleft()
            for e, y in d.adj[x]:
                if e == parent_edge[x]:
                    continue
                if y in dist:
                    cyc = dist[x] + dist[y] + 1
                    if best is None or cyc < best:
                        best = cyc
                else:
                    dist[y] = dist[x] + 1
                    parent_edge[y] = e
                    q.append(y)
    return best if best is not None else 0


def detect_multi_edges(d: DualGraph) -> Optional[tuple[int, int]]:
    """First pair of faces joined by two or more dual edges, if any."""
    seen = set()
    for a, b in d.edges:
        key = (min(a, b), max(a, b))
        if key in seen:
            return key
        seen.add(key)
    return None


@dataclass(frozen=True)
class TreeParams:
    p: int
    l: int
    z: int
    h: int
    t: int

    @property
    def last_level_size(self) -> int:
        return 3 * 2 ** (self.l - 1)

    @staticmethod
    def branch_nodes(level: int) -> int:
        """Nodes of one root branch up to ``level``."""
        return 2 ** level - 1


def tree_params(p: int) -> TreeParams:
    if p < 1:
        raise InvalidArgument("p must be at least 1")
    l = 1
    while 3 * 2 ** l - 2 <= p:
        l += 1
    z = p - (3 * 2 ** (l - 1) - 2)
    h = l if z else l - 1
    return TreeParams(p=p, l=l, z=z, h=h, t=comb(3 * 2 ** (l - 1), z))


def required_girth(p: int) -> int:
    return 2 * tree_params(p).h + 1


@dataclass(frozen=True)
class Realization:
    root: int
    index: int
    vertex_set: frozenset
    tree_edges: tuple
    cycle_edges: tuple

    @property
    def cycle_count(self) -> int:
        return len(self.cycle_edges)


def enumerate_realizations(d: DualGraph, root: int, p: int, check_girth: bool = True) -> list[Realization]:
    """All ``t(p)`` complete 3-graphs on ``p`` nodes rooted at ``root``."""
    tp = tree_params(p)
    if check_girth:
        g = girth(d)
        if g < 2 * tp.h + 1:
            raise GirthError(g, 2 * tp.h + 1)
    # BFS tree to depth l; children listed in rotation order of the parent
    levels = [[root]]
    parent_edge = {root: None}
    for _depth in range(tp.l):
        nxt = []
        for x in levels[-1]:
            for e, y in d.adj[x]:
                if e == parent_edge[x] or y in parent_edge:
                    continue
                parent_edge[y] = e
                nxt.append(y)
        levels.append(nxt)
    body = [v for lev in levels[: tp.l] for v in lev]
    last = levels[tp.l] if tp.z else []
    if len(body) != 3 * 2 ** (tp.l - 1) - 2 or (tp.z and len(last) != tp.last_level_size):
        raise ContractViolation("neighbourhood of the root is not tree-like at the required depth")
    out = []
    for j, chosen in enumerate(itertools.combinations(last, tp.z)):
        U = frozenset(body) | frozenset(chosen)
        tree = tuple(sorted(parent_edge[v] for v in U if v != root))
        tree_set = set(tree)
        cyc = tuple(e for e in d.induced_edges(U) if e not in tree_set)
        leaves = set(chosen) if tp.z else set(levels[tp.l - 1])
        for e in cyc:
            a, b = d.edges[e]
            if a not in leaves or b not in leaves:
                raise ContractViolation("cycle-creating edge joins a non-leaf node")
        out.append(Realization(root, j, U, tree, cyc))
    return out


def all_realizations(d: DualGraph, p: int) -> list[Realization]:
    tp = tree_params(p)
    g = girth(d)
    if g < 2 * tp.h + 1:
        raise GirthError(g, 2 * tp.h + 1)
    return [r for root in d.vertices for r in enumerate_realizations(d, root, p, check_girth=False)]


@dataclass
class RecurrenceTable:
    p: int
    r: dict = field(default_factory=dict)  # dual edge -> total recurrence
    r_by_root: dict = field(default_factory=dict)  # (root, edge) -> count
    cycle_sum: int = 0
    occupied: frozenset = frozenset()

    @property
    def cycle_edges(self) -> frozenset:
        return frozenset(e for e, v in self.r.items() if v > 0)

    @property
    def occupied_cycle_edges(self) -> frozenset:
        return frozenset(e for e in self.cycle_edges if e in self.occupied)

    @property
    def unoccupied_cycle_edges(self) -> frozenset:
        return frozenset(e for e in self.cycle_edges if e not in self.occupied)

    def total(self, e: int) -> int:
        return self.r.get(e, 0)

    def sum_over(self, edges: Iterable[int]) -> int:
        return sum(self.r.get(e, 0) for e in edges)


def recurrence_table(d: DualGraph, p: int, occ: Optional[OccupancyTable] = None,
                     realizations: Optional[list] = None) -> RecurrenceTable:
    reals = realizations if realizations is not None else all_realizations(d, p)
    tab = RecurrenceTable(p=p, occupied=occ.occupied_edges if occ is not None else frozenset())
    for e in range(len(d.edges)):
        tab.r[e] = 0
    for rl in reals:
        for e in rl.cycle_edges:
            tab.r[e] += 1
            key = (rl.root, e)
            tab.r_by_root[key] = tab.r_by_root.get(key, 0) + 1
        tab.cycle_sum += rl.cycle_count
    return tab


def cycle_rank(d: DualGraph, U: Iterable[int]) -> int:
    """``c(U) = |E(U)| - |U| + 1`` for a connected induced subgraph."""
    U = set(U)
    return len(d.induced_edges(U)) - len(U) + 1


def connected_subsets(d: DualGraph, max_size: int) -> Iterable[frozenset]:
    """Every connected vertex subset of size ``<= max_size``, each once."""
    for v in d.vertices:
        yield from _extend(d, frozenset([v]), {y for y in d.neighbors[v] if y > v}, v, max_size)


def _extend(d, sub, ext, v, max_size):
    yield sub
    if len(sub) == max_size:
        return
    ext = set(ext)
    while ext:
        w = min(ext)
        ext.discard(w)
        excl = set().union(*(d.neighbors[u] for u in sub)) | sub
        new_ext = ext | {y for y in d.neighbors[w] if y > v and y not in excl}
        yield from _extend(d, sub | {w}, new_ext, v, max_size)


def find_singular_patterns(cg: CheckGraph) -> list[tuple]:
    """Occurrences of the singular pattern as ``(faces, interior_checks, (e1, e2))``.

    The pattern is a 4-clique on ``v, w, y, z`` drawn with a second ``y-z``
    edge so that its outside is a digon; all four triangles must be faces
    of ``cg``. ``v`` and ``w`` are the interior checks.
    """
    d = DualGraph(cg)
    out = []
    seen = set()
    for e1 in range(len(cg.edges)):
        for e2 in range(e1 + 1, len(cg.edges)):
            if set(cg.edges[e1]) != set(cg.edges[e2]):
                continue
            y, z = cg.edges[e1]
            for A in cg.edge_faces[e1]:
                for B in cg.edge_faces[e2]:
                    if A == B:
                        continue
                    nA = {f for e, f in d.adj[A] if e != e1}
                    nB = {f for e, f in d.adj[B] if e != e2}
                    if len(nA) != 2 or nA != nB or A in nA or B in nA:
                        continue
                    C, D = sorted(nA)
                    if C not in d.neighbors[D]:
                        continue
                    faces = frozenset((A, B, C, D))
                    inner = cg.vc(faces) - {y, z}
                    if len(inner) != 2 or faces in seen:
                        continue
                    seen.add(faces)
                    out.append((faces, frozenset(inner), (e1, e2)))
    return out


def find_singular_nodes(g: TannerGraph, cg: CheckGraph, occ: OccupancyTable) -> tuple[frozenset, int]:
    """Degree-1 bits sitting on an interior check of a singular pattern, and their count."""
    interior: set = set()
    for _faces, inner, _edges in find_singular_patterns(cg):
        interior |= inner
    bits = frozenset(b for c in interior for b in occ.node_bits.get(c, ()))
    return bits, len(bits)


def order_nodes(d: DualGraph, U: Iterable[int]) -> list[int]:
    """Order ``U`` so each node has 1 or 2 neighbours among its predecessors."""
    U = set(U)
    if not d.is_connected_subset(U):
        raise InvalidArgument("node set must induce a connected subgraph")
    rest = set(U)
    removed: list[int] = []
    while len(rest) > 1:
        pick = None
        for u in sorted(rest):
            deg = sum(1 for _, y in d.adj[u] if y in rest)
            if deg in (1, 2) and d.is_connected_subset(rest - {u}):
                pick = u
                break
        if pick is None:
            raise ContractViolation("no removable node of degree 1 or 2")
        removed.append(pick)
        rest.discard(pick)
    return list(rest) + removed[::-1]


def check_order(d: DualGraph, order: list[int]) -> bool:
    for i in range(1, len(order)):
        prefix = set(order[:i])
        deg = sum(1 for _, y in d.adj[order[i]] if y in prefix)
        if deg not in (1, 2) or not d.is_connected_subset(prefix | {order[i]}):
            return False
    return True


def edge_labels(d: DualGraph, names: Mapping[tuple, str]) -> dict:
    """Map dual edges to caller-chosen names keyed by check-graph endpoint pairs."""
    out = {}
    for e, (u, v) in enumerate(d.cg.edges):
        key = frozenset((u, v))
        for k, name in names.items():
            if frozenset(k) == key:
                out[e] = name
    return out

"""Random planar Tanner graphs built by placing bits on a random triangulation."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .checkgraph import CheckGraph, Identification, IdentificationMap, build_check_graph, place_bits
from .embedding import Embedding
from .errors import InvalidSpec
from .tanner import TannerGraph

FLIPS_PER_EDGE = 10
MAX_ATTEMPTS = 200


def fan_faces(m: int) -> list[tuple]:
    """Oriented faces of the fan triangulation on vertices ``1..m``.

    Vertex 1 is joined to every other vertex along the path ``2..m``; the
    outer polygon is closed by a second fan from vertex 2.
    """
    if m < 3:
        raise InvalidSpec("need at least 3 checks")
    v = list(range(1, m + 1))
    inner = [(v[0], v[i], v[i + 1]) for i in range(1, m - 1)]
    outer = [(v[1], v[0], v[m - 1])] + [(v[1], v[i + 1], v[i]) for i in range(m - 2, 1, -1)]
    return inner + outer


def random_triangulation(m: int, rng: random.Random, flips: Optional[int] = None) -> list[tuple]:
    """Fan triangulation followed by a walk of random edge flips (kept simple)."""
    faces = [list(f) for f in fan_faces(m)]
    if m < 5:
        return [tuple(f) for f in faces]
    n_flips = FLIPS_PER_EDGE * (3 * m - 6) if flips is None else flips
    for _ in range(n_flips):
        i = rng.randrange(len(faces))
        j0 = rng.randrange(3)
        u, v, a = faces[i][j0], faces[i][(j0 + 1) % 3], faces[i][(j0 + 2) % 3]
        # the face on the other side holds the dart v -> u
        k = next(k for k, f in enumerate(faces) if k != i and any(
            f[s] == v and f[(s + 1) % 3] == u for s in range(3)))
        f2 = faces[k]
        s = next(s for s in range(3) if f2[s] == v and f2[(s + 1) % 3] == u)
        b = f2[(s + 2) % 3]
        if a == b or _adjacent(faces, a, b):
            continue
        faces[i] = [a, u, b]
        faces[k] = [b, v, a]
    return [tuple(f) for f in faces]


def _adjacent(faces, a, b) -> bool:
    return any(a in f and b in f for f in faces)


@dataclass
class EnsembleSpec:
    """Ensemble of ``count`` graphs on ``m`` checks.

    ``degree_profile`` maps bit degree to count. Degrees above 3 are placed
    as fans of ``degree - 2`` faces around a common check.
    """

    m: int
    degree_profile: dict
    seed: int = 0
    count: int = 1

    def __post_init__(self):
        self.degree_profile = {int(k): int(v) for k, v in self.degree_profile.items() if int(v) > 0}
        if self.m < 3:
            raise InvalidSpec("need at least 3 checks")
        if any(k < 1 for k in self.degree_profile):
            raise InvalidSpec("bit degrees must be at least 1")
        faces_needed = sum(c * (d - 2) for d, c in self.degree_profile.items() if d >= 3)
        if faces_needed > 2 * self.m - 4:
            raise InvalidSpec(f"profile needs {faces_needed} faces but only {2 * self.m - 4} exist")
        if self.degree_profile.get(2, 0) > 3 * self.m - 6:
            raise InvalidSpec("more degree-2 bits than check-graph edges")
        if any(d > self.m for d in self.degree_profile):
            raise InvalidSpec("bit degree exceeds the number of checks")
        if self.n == 0:
            raise InvalidSpec("empty profile")

    @property
    def n(self) -> int:
        return sum(self.degree_profile.values())

    @property
    def target_rate(self) -> Fraction:
        return 1 - Fraction(self.m, self.n)


@dataclass
class GeneratedGraph:
    graph: TannerGraph
    embedding: Embedding
    check_graph: CheckGraph
    identification: IdentificationMap
    provenance: dict = field(default_factory=dict)


def _faces_around(emb: Embedding, v) -> list[int]:
    fd = emb.face_of_dart
    return [fd[d] for d in emb.rotation.darts_at[v]]


def _place(spec: EnsembleSpec, cg: CheckGraph, rng: random.Random) -> Optional[dict]:
    emb = cg.embedding
    free = set(range(len(cg.faces)))
    placement: dict = {}
    idx = 0

    def name():
        nonlocal idx
        idx += 1
        return f"b{idx}"

    highs = sorted((d for d, c in spec.degree_profile.items() if d > 3 for _ in range(c)), reverse=True)
    for lam in highs:
        k = lam - 2
        options = []
        for v in cg.vertices:
            ring = _faces_around(emb, v)
            if k >= len(ring):
                continue
            for s in range(len(ring)):
                run = [ring[(s + j) % len(ring)] for j in range(k)]
                if all(f in free for f in run) and len(set(run)) == k and len(cg.vc(run)) == k + 2:
                    options.append(tuple(sorted(run)))
        if not options:
            return None
        run = rng.choice(sorted(set(options)))
        free -= set(run)
        placement[name()] = Identification("faces", run)
    n3 = spec.degree_profile.get(3, 0)
    if n3 > len(free):
        return None
    for f in rng.sample(sorted(free), n3):
        placement[name()] = Identification("face", f)
    inner = set()
    for it in placement.values():
        if it.kind == "faces":
            inner |= {e for e, (a, b) in enumerate(cg.edge_faces) if a in it.target and b in it.target}
    usable = [e for e in range(len(cg.edges)) if e not in inner]
    n2 = spec.degree_profile.get(2, 0)
    if n2 > len(usable):
        return None
    for e in rng.sample(usable, n2):
        placement[name()] = Identification("edge", e)
    n1 = spec.degree_profile.get(1, 0)
    verts = list(cg.vertices)
    picks = rng.sample(verts, n1) if n1 <= len(verts) else [rng.choice(verts) for _ in range(n1)]
    for c in picks:
        placement[name()] = Identification("node", c)
    # shuffle declaration order so that bit ids do not encode degree
    order = list(placement)
    rng.shuffle(order)
    renamed = {}
    for i, b in enumerate(order):
        renamed[f"b{i + 1}"] = placement[b]
    return renamed


def generate_one(spec: EnsembleSpec, seed: int) -> GeneratedGraph:
    """One graph; its check graph is rebuilt from the output and returned.

    Triangulation edges that no bit pins down are redrawn by the
    deterministic completion, so the returned check graph can differ from
    the random triangulation on exactly those edges (counted in
    ``provenance['redrawn_edges']``).
    """
    rng = random.Random(seed)
    for attempt in range(MAX_ATTEMPTS):
        tri = random_triangulation(spec.m, rng)
        seed_cg = CheckGraph(Embedding.from_faces(tri, vertices=range(1, spec.m + 1)))
        placement = _place(spec, seed_cg, rng)
        if placement is None:
            continue
        g, emb = place_bits(seed_cg, placement)
        cg, ident, _ = build_check_graph(g, emb)
        redrawn = len(set(map(frozenset, seed_cg.edges)) - set(map(frozenset, cg.edges)))
        prov = {
            "generator": "random-triangulation-placement",
            "seed": seed,
            "attempt": attempt,
            "m": spec.m,
            "profile": {str(k): v for k, v in sorted(spec.degree_profile.items())},
            "flips_per_edge": FLIPS_PER_EDGE,
            "redrawn_edges": redrawn,
        }
        return GeneratedGraph(g, emb, cg, ident, prov)
    raise InvalidSpec("could not place the degree profile on random triangulations")


def derive_seed(seed: int, index: int) -> int:
    return random.Random(f"{seed}:{index}").getrandbits(64)


def generate(spec: EnsembleSpec) -> list[GeneratedGraph]:
    return [generate_one(spec, derive_seed(spec.seed, i)) for i in range(spec.count)]


def random_profile(rng: random.Random, m: int, n: int, max_high: int = 1) -> dict:
    """Random degree profile with ``n`` bits on ``m`` checks that fits the face budget."""
    faces = 2 * m - 4
    profile = {1: 0, 2: 0, 3: 0}
    budget = faces
    n_high = rng.randint(0, max_high) if m >= 5 else 0
    left = n
    for _ in range(n_high):
        lam = rng.randint(4, min(m, 3 + max(1, budget // 3)))
        if lam - 2 > budget or left == 0:
            break
        profile[lam] = profile.get(lam, 0) + 1
        budget -= lam - 2
        left -= 1
    n3 = rng.randint(0, min(budget, left))
    profile[3] += n3
    left -= n3
    n2 = rng.randint(0, min(left, 3 * m - 6))
    profile[2] += n2
    profile[1] += left - n2
    return {k: v for k, v in profile.items() if v}


def random_graph(m: int, n: int, seed: int, max_high: int = 1) -> GeneratedGraph:
    rng = random.Random(seed)
    spec = EnsembleSpec(m, random_profile(rng, m, n, max_high), seed=seed)
    return generate_one(spec, rng.getrandbits(64))

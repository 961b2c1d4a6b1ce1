from __future__ import annotations

import random
from fractions import Fraction

import pytest

from planartanner.checkgraph import CheckGraph, Identification, build_check_graph, place_bits
from planartanner.embedding import Embedding
from planartanner.errors import InvalidSpec
from planartanner.generate import random_graph
from planartanner.tanner import TannerGraph

# Dual edge names of the five-check example, keyed by check-graph endpoints.
FIG5_EDGE_NAMES = {
    (2, 1): "e1", (2, 4): "e2", (2, 3): "e3", (1, 4): "e4", (4, 5): "e5",
    (3, 5): "e6", (1, 5): "e7", (1, 3): "e8", (3, 4): "e9",
}


def fig1_graph() -> TannerGraph:
    """Degree-4 bit on the cycle 1-2-4-3, degree-2 bits on three of its sides, a degree-1 bit on 3."""
    return TannerGraph.from_neighborhoods(
        {"a": [1, 2, 4, 3], "b": [1, 2], "c": [2, 4], "d": [3, 4], "e": [3]}, [1, 2, 3, 4])


def fig5_graph() -> TannerGraph:
    """Bipyramid check graph: equator 1, 3, 4 and poles 2, 5."""
    return TannerGraph.from_neighborhoods(
        {"a": [1], "b": [1, 4], "c": [1, 2, 3], "d": [2, 3, 4], "e": [3, 4, 5], "f": [3, 5], "g": [1, 5]},
        [1, 2, 3, 4, 5])


def face_with_corners(cg: CheckGraph, corners) -> int:
    hits = [f for f, c in enumerate(cg.face_corners) if c == frozenset(corners)]
    assert len(hits) == 1
    return hits[0]


def full_inverse(cg: CheckGraph, extra: dict) -> tuple[TannerGraph, Embedding]:
    """One degree-3 bit on every face plus the given extra identifications."""
    placement = {f"f{i + 1}": Identification("face", i) for i in range(len(cg.faces))}
    placement.update(extra)
    return place_bits(cg, placement)


def stacked_octahedron() -> CheckGraph:
    """Octahedron with check 7 stacked into face (1,2,3); 7 has three faces with distinct outer neighbours."""
    faces = [(7, 1, 2), (7, 2, 3), (7, 3, 1), (1, 3, 4), (1, 4, 5), (1, 5, 2),
             (6, 3, 2), (6, 4, 3), (6, 5, 4), (6, 2, 5)]
    return CheckGraph(Embedding.from_faces(faces, vertices=range(1, 8)))


def singular_pattern_graph() -> CheckGraph:
    """4-clique on v=1, w=2, y=3, z=4 whose two y-z edges bound a digon holding checks 5, 6."""
    faces = [(1, 3, 4), (1, 4, 2), (1, 2, 3), (2, 4, 3),
             (4, 3, 5), (3, 6, 5), (3, 4, 6), (4, 5, 6)]
    labels = [(0, "yz1", 0), (0, 0, 0), (0, 0, 0), (0, "yz2", 0),
              ("yz1", 0, 0), (0, 0, 0), ("yz2", 0, 0), (0, 0, 0)]
    return CheckGraph(Embedding.from_faces(faces, labels=labels, vertices=range(1, 7)))


def random_instances(count: int, seed: int = 0, min_rate=Fraction(5, 8), m_range=(4, 9), max_n=24,
                     max_high: int = 2):
    """Deterministic stream of generated graphs with design rate >= min_rate."""
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        m = rng.randint(*m_range)
        lo = max(m + 1, -(-int(m / (1 - min_rate)) // 1))
        if lo > max_n:
            continue
        n = rng.randint(lo, max_n)
        if Fraction(n - m, n) < min_rate:
            continue
        try:
            gg = random_graph(m, n, rng.getrandbits(32), max_high=max_high)
        except InvalidSpec:
            continue
        out.append(gg)
    return out


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one status line per acceptance criterion for the terminal summary."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fig1():
    g = fig1_graph()
    return (g,) + build_check_graph(g)


@pytest.fixture(scope="session")
def fig5():
    g = fig5_graph()
    return (g,) + build_check_graph(g)


@pytest.fixture(scope="session")
def ensemble():
    return random_instances(120, seed=7)

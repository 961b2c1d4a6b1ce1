from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from planartanner.errors import TrivialCodeError
from planartanner.oracle import brute_force_min_distance, min_distance_oracle
from planartanner.tanner import TannerGraph


def test_hamming_7_4():
    H = np.array([[1, 0, 1, 0, 1, 0, 1], [0, 1, 1, 0, 0, 1, 1], [0, 0, 0, 1, 1, 1, 1]])
    g = TannerGraph.from_matrix(H)
    assert min_distance_oracle(g) == 3
    assert brute_force_min_distance(g) == 3


def test_repetition_code():
    n = 6
    H = np.zeros((n - 1, n), dtype=int)
    for i in range(n - 1):
        H[i, i] = H[i, i + 1] = 1
    assert min_distance_oracle(TannerGraph.from_matrix(H)) == n


def test_trivial_code_rejected():
    g = TannerGraph.from_matrix(np.eye(3, dtype=int))
    with pytest.raises(TrivialCodeError):
        min_distance_oracle(g)
    with pytest.raises(TrivialCodeError):
        brute_force_min_distance(g)


@settings(max_examples=60, deadline=None)
@given(arrays(np.uint8, st.tuples(st.integers(1, 5), st.integers(2, 11)), elements=st.integers(0, 1)))
def test_oracle_matches_brute_force(H):
    g = TannerGraph.from_matrix(H)
    try:
        expected = brute_force_min_distance(g)
    except TrivialCodeError:
        with pytest.raises(TrivialCodeError):
            min_distance_oracle(g)
        return
    assert min_distance_oracle(g) == expected


def test_capped_search_for_large_dimension():
    # 40 bits, 3 checks: dimension 37 forces the capped search
    rng = np.random.default_rng(3)
    H = rng.integers(0, 2, size=(3, 40))
    g = TannerGraph.from_matrix(H)
    d = min_distance_oracle(g)
    assert d is not None and d <= 4
    # exhaustive check over small weights
    cols = [int("".join(map(str, H[:, j])), 2) for j in range(40)]
    import itertools
    best = None
    for w in range(1, 5):
        for combo in itertools.combinations(range(40), w):
            acc = 0
            for j in combo:
                acc ^= cols[j]
            if acc == 0:
                best = w
                break
        if best:
            break
    assert d == best


def test_capped_search_reports_none_above_cap():
    # 30 bits, 2 checks, repeated nonzero columns: dimension 28 and d = 2
    cols = [1, 2, 3] * 10
    H = np.array([[(c >> r) & 1 for c in cols] for r in range(2)])
    g = TannerGraph.from_matrix(H)
    assert min_distance_oracle(g, weight_cap=1) is None
    assert min_distance_oracle(g, weight_cap=8) == 2

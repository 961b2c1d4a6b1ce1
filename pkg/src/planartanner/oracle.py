"""Exact minimum distance, used as ground truth for the bound engine."""

from __future__ import annotations

import itertools
from collections import defaultdict
from typing import Optional

import numpy as np

from . import gf2
from .errors import TrivialCodeError
from .tanner import TannerGraph

FULL_ENUMERATION_MAX_DIM = 24
DEFAULT_WEIGHT_CAP = 8


def _to_words(x: int, n_words: int) -> list[int]:
    mask = (1 << 64) - 1
    return [(x >> (64 * w)) & mask for w in range(n_words)]


def _span_table(vectors: np.ndarray) -> np.ndarray:
    table = np.zeros((1, vectors.shape[1]), dtype=np.uint64)
    for v in vectors:
        table = np.concatenate([table, table ^ v])
    return table


def _min_weight_full(basis: list[int], n: int) -> int:
    n_words = (n + 63) // 64
    vecs = np.array([_to_words(b, n_words) for b in basis], dtype=np.uint64)
    k = len(basis)
    k1 = (k + 1) // 2
    low = _span_table(vecs[:k1])
    high = _span_table(vecs[k1:])
    best = n + 1
    for idx, h in enumerate(high):
        weights = np.bitwise_count(low ^ h).sum(axis=1)
        if idx == 0:
            weights = weights[1:]
        if weights.size:
            best = min(best, int(weights.min()))
    return best


def _min_weight_capped(g: TannerGraph, cap: int) -> Optional[int]:
    cols = g.check_masks
    n = g.n
    half = (cap + 1) // 2
    by_size: dict[int, dict[int, list[int]]] = {}
    for size in range(half + 1):
        table: dict[int, list[int]] = defaultdict(list)
        for combo in itertools.combinations(range(n), size):
            s = 0
            mask = 0
            for j in combo:
                s ^= cols[j]
                mask |= 1 << j
            table[s].append(mask)
        by_size[size] = table
    for w in range(1, cap + 1):
        a = (w + 1) // 2
        b = w - a
        big, small = by_size[a], by_size[b]
        for syn, masks_small in small.items():
            masks_big = big.get(syn)
            if not masks_big:
                continue
            for ms in masks_small:
                for mb in masks_big:
                    if not ms & mb:
                        return w
    return None


def min_distance_oracle(g: TannerGraph, weight_cap: Optional[int] = None) -> Optional[int]:
    """Exact minimum distance of the code of ``g``.

    Dimension up to 24 is enumerated in full; above that only codewords of
    weight ``<= weight_cap`` (default 8) are searched and ``None`` means
    ``d > weight_cap``.
    """
    basis = gf2.nullspace(g.parity_rows, g.n)
    k = len(basis)
    if k == 0:
        raise TrivialCodeError("code has dimension 0")
    if k <= FULL_ENUMERATION_MAX_DIM:
        return _min_weight_full(basis, g.n)
    return _min_weight_capped(g, DEFAULT_WEIGHT_CAP if weight_cap is None else weight_cap)


def brute_force_min_distance(g: TannerGraph) -> int:
    """Scan all ``2^n`` words; tiny codes only."""
    rows = g.parity_rows
    best = None
    for x in range(1, 1 << g.n):
        if gf2.mat_vec(rows, x) == 0:
            w = gf2.popcount(x)
            if best is None or w < best:
                best = w
    if best is None:
        raise TrivialCodeError("code has dimension 0")
    return best

"""GF(2) linear algebra on Python int bitsets.

A row (or vector) of length ``n`` is an int whose bit ``j`` holds entry ``j``.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def popcount(x: int) -> int:
    return bin(x).count("1")


def row_reduce(rows: Iterable[int], n_cols: int, reverse: bool = False) -> tuple[list[int], list[int]]:
    """Reduced row echelon form.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped. With
    ``reverse`` the pivot search scans columns from ``n_cols - 1`` down.
    """
    work = [r for r in rows if r]
    pivots: list[int] = []
    row_idx = 0
    cols = range(n_cols - 1, -1, -1) if reverse else range(n_cols)
    for col in cols:
        bit = 1 << col
        pivot = None
        for r in range(row_idx, len(work)):
            if work[r] & bit:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        for r in range(len(work)):
            if r != row_idx and work[r] & bit:
                work[r] ^= work[row_idx]
        pivots.append(col)
        row_idx += 1
        if row_idx == len(work):
            break
    return work[:row_idx], pivots


def rank(rows: Iterable[int], n_cols: int, reverse: bool = False) -> int:
    return len(row_reduce(rows, n_cols, reverse)[1])


def nullspace(rows: Sequence[int], n_cols: int) -> list[int]:
    """Basis of ``{x : popcount(row & x) even for every row}``."""
    reduced, pivots = row_reduce(rows, n_cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for row, col in zip(reduced, pivots):
            if (row >> free) & 1:
                vec |= 1 << col
        basis.append(vec)
    return basis


def span_min_weight(basis: Sequence[int]) -> int:
    """Smallest nonzero combination of ``basis`` (Gray-code walk, small spans only)."""
    best = 0
    best_w = None
    cur = 0
    for i in range(1, 1 << len(basis)):
        cur ^= basis[(i & -i).bit_length() - 1]
        w = popcount(cur)
        if best_w is None or w < best_w:
            best, best_w = cur, w
    if best_w is None:
        raise ValueError("empty basis")
    return best


def mat_vec(rows: Sequence[int], x: int) -> int:
    """Syndrome bitset: bit ``i`` is the parity of ``rows[i] & x``."""
    out = 0
    for i, r in enumerate(rows):
        if popcount(r & x) & 1:
            out |= 1 << i
    return out

"""Tanner graphs, induced bit sets and the codeword-supporting criterion."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Optional

import numpy as np

from . import gf2
from .errors import ContractViolation, InvalidArgument

Node = Hashable


@dataclass(frozen=True, eq=False)
class TannerGraph:
    """Bipartite bit/check graph of a binary linear code.

    ``edges`` keeps declaration order; it fixes dart numbering when a
    rotation system is attached (edge ``k`` owns darts ``2k`` bit->check and
    ``2k+1`` check->bit).
    """

    bit_nodes: tuple
    check_nodes: tuple
    edges: tuple
    labels: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "bit_nodes", tuple(self.bit_nodes))
        object.__setattr__(self, "check_nodes", tuple(self.check_nodes))
        object.__setattr__(self, "edges", tuple((b, c) for b, c in self.edges))
        labels = self.labels
        if isinstance(labels, Mapping):
            labels = tuple(labels.items())
        object.__setattr__(self, "labels", tuple(labels))
        if not self.bit_nodes or not self.check_nodes:
            raise InvalidArgument("need at least one bit node and one check node")
        bits, checks = set(self.bit_nodes), set(self.check_nodes)
        if len(bits) != len(self.bit_nodes) or len(checks) != len(self.check_nodes):
            raise InvalidArgument("duplicate node ids")
        if bits & checks:
            raise InvalidArgument(f"ids used as both bit and check: {sorted(map(str, bits & checks))}")
        seen = set()
        for b, c in self.edges:
            if b not in bits or c not in checks:
                raise InvalidArgument(f"edge ({b!r}, {c!r}) does not join a bit node to a check node")
            if (b, c) in seen:
                raise InvalidArgument(f"duplicate edge ({b!r}, {c!r})")
            seen.add((b, c))

    def __eq__(self, other):
        if not isinstance(other, TannerGraph):
            return NotImplemented
        return (self.bit_nodes, self.check_nodes, self.edges, self.labels) == (
            other.bit_nodes, other.check_nodes, other.edges, other.labels)

    def __hash__(self):
        return hash((self.bit_nodes, self.check_nodes, self.edges))

    def __repr__(self):
        return f"TannerGraph(n={self.n}, m={self.m}, edges={len(self.edges)})"

    @property
    def n(self) -> int:
        return len(self.bit_nodes)

    @property
    def m(self) -> int:
        return len(self.check_nodes)

    @cached_property
    def bit_index(self) -> dict:
        return {b: i for i, b in enumerate(self.bit_nodes)}

    @cached_property
    def check_index(self) -> dict:
        return {c: i for i, c in enumerate(self.check_nodes)}

    @cached_property
    def _nbrs(self) -> dict:
        out = {b: [] for b in self.bit_nodes}
        for b, c in self.edges:
            out[b].append(c)
        return {b: frozenset(cs) for b, cs in out.items()}

    @cached_property
    def check_masks(self) -> tuple:
        """Per bit, its check neighbourhood as a bitset over check indices."""
        ci = self.check_index
        masks = []
        for b in self.bit_nodes:
            mask = 0
            for c in self._nbrs[b]:
                mask |= 1 << ci[c]
            masks.append(mask)
        return tuple(masks)

    @cached_property
    def parity_rows(self) -> tuple:
        """Rows of H as bitsets over bit indices, in check order."""
        rows = [0] * self.m
        bi, ci = self.bit_index, self.check_index
        for b, c in self.edges:
            rows[ci[c]] |= 1 << bi[b]
        return tuple(rows)

    def neighborhood(self, bit) -> frozenset:
        try:
            return self._nbrs[bit]
        except KeyError:
            raise InvalidArgument(f"unknown bit node {bit!r}") from None

    def degree(self, bit) -> int:
        return len(self.neighborhood(bit))

    def bits_of_degree(self, d: int) -> list:
        return [b for b in self.bit_nodes if len(self._nbrs[b]) == d]

    def max_bit_degree(self) -> int:
        return max(len(s) for s in self._nbrs.values())

    def label(self, node) -> str:
        return dict(self.labels).get(node, str(node))

    def parity_check_matrix(self) -> np.ndarray:
        H = np.zeros((self.m, self.n), dtype=np.uint8)
        bi, ci = self.bit_index, self.check_index
        for b, c in self.edges:
            H[ci[c], bi[b]] = 1
        return H

    @property
    def design_rate(self) -> Fraction:
        return 1 - Fraction(self.m, self.n)

    def check_mask_of(self, checks: Iterable) -> int:
        ci = self.check_index
        mask = 0
        for c in checks:
            try:
                mask |= 1 << ci[c]
            except KeyError:
                raise InvalidArgument(f"unknown check node {c!r}") from None
        return mask

    @classmethod
    def from_neighborhoods(cls, nbrs: Mapping, check_nodes: Optional[Iterable] = None) -> "TannerGraph":
        """Build from ``{bit: iterable of checks}``; checks default to sorted union."""
        if check_nodes is None:
            check_nodes = sorted({c for cs in nbrs.values() for c in cs}, key=_sort_key)
        edges = [(b, c) for b, cs in nbrs.items() for c in cs]
        return cls(tuple(nbrs), tuple(check_nodes), tuple(edges))

    @classmethod
    def from_matrix(cls, H, bit_nodes=None, check_nodes=None) -> "TannerGraph":
        H = np.asarray(H) % 2
        m, n = H.shape
        bit_nodes = tuple(bit_nodes) if bit_nodes is not None else tuple(f"b{j}" for j in range(n))
        check_nodes = tuple(check_nodes) if check_nodes is not None else tuple(f"c{i}" for i in range(m))
        edges = [(bit_nodes[j], check_nodes[i]) for j in range(n) for i in range(m) if H[i, j]]
        return cls(bit_nodes, check_nodes, tuple(edges))


def _sort_key(x):
    return (0, x, "") if isinstance(x, (int, np.integer)) else (1, 0, str(x))


@dataclass(frozen=True)
class BitVector:
    """Dense bit sequence; bit ``j`` is the ``j``-th declared bit node."""

    length: int
    value: int

    def __post_init__(self):
        if self.length < 1 or self.value >> self.length:
            raise InvalidArgument("bit vector value exceeds its length")

    @property
    def weight(self) -> int:
        return gf2.popcount(self.value)

    def to_list(self) -> list[int]:
        return [(self.value >> j) & 1 for j in range(self.length)]

    def support(self, g: TannerGraph) -> list:
        return [b for j, b in enumerate(g.bit_nodes) if (self.value >> j) & 1]

    @classmethod
    def from_support(cls, g: TannerGraph, bits: Iterable) -> "BitVector":
        v = 0
        for b in bits:
            v |= 1 << g.bit_index[b]
        return cls(g.n, v)


@dataclass(frozen=True)
class CodeSummary:
    n: int
    m: int
    rank: int
    design_rate: Fraction
    true_rate: Fraction
    min_distance: Optional[int] = None

    @property
    def dimension(self) -> int:
        return self.n - self.rank


def neighbors(g: TannerGraph, bits: Iterable) -> set:
    out: set = set()
    for b in bits:
        out |= g.neighborhood(b)
    return out


def induced_bits(g: TannerGraph, checks: Iterable) -> set:
    """Bits whose whole neighbourhood lies inside ``checks`` (degree-0 bits always)."""
    mask = g.check_mask_of(checks)
    return {b for b, nb in zip(g.bit_nodes, g.check_masks) if not nb & ~mask}


def induced_mask(g: TannerGraph, check_mask: int) -> int:
    """Bitset form of :func:`induced_bits` over bit indices."""
    out = 0
    for j, nb in enumerate(g.check_masks):
        if not nb & ~check_mask:
            out |= 1 << j
    return out


def is_codeword_supporting(g: TannerGraph, checks: Iterable) -> bool:
    checks = set(checks)
    return len(induced_bits(g, checks)) > len(checks)


# Null-space enumeration is capped at this many dimensions.
_MAX_SUBCODE_DIM = 16


def extract_low_weight_codeword(g: TannerGraph, checks: Iterable) -> BitVector:
    """Minimum-weight nonzero word of the subcode living on ``induced_bits(g, checks)``.

    Only the first ``|checks| + 1 + 16`` induced columns are kept, which
    still leaves a nonzero subcode and bounds the enumeration.
    """
    checks = set(checks)
    if not is_codeword_supporting(g, checks):
        raise ContractViolation("check set is not codeword-supporting")
    ci, bi = g.check_index, g.bit_index
    cols = sorted(bi[b] for b in induced_bits(g, checks))
    cols = cols[: len(checks) + 1 + _MAX_SUBCODE_DIM]
    row_ids = sorted(ci[c] for c in checks)
    # restricted rows over local column indices
    rows = []
    for r in row_ids:
        full = g.parity_rows[r]
        rows.append(sum(1 << k for k, j in enumerate(cols) if (full >> j) & 1))
    basis = gf2.nullspace(rows, len(cols))
    local = gf2.span_min_weight(basis)
    value = 0
    for k, j in enumerate(cols):
        if (local >> k) & 1:
            value |= 1 << j
    return BitVector(g.n, value)


def is_codeword(g: TannerGraph, x: BitVector) -> bool:
    return x.length == g.n and gf2.mat_vec(g.parity_rows, x.value) == 0


def code_summary(g: TannerGraph, min_distance: Optional[int] = None) -> CodeSummary:
    r = gf2.rank(g.parity_rows, g.n)
    return CodeSummary(
        n=g.n,
        m=g.m,
        rank=r,
        design_rate=1 - Fraction(g.m, g.n),
        true_rate=1 - Fraction(r, g.n),
        min_distance=min_distance,
    )

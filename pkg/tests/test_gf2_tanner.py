from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planartanner import gf2
from planartanner.errors import ContractViolation, InvalidArgument
from planartanner.tanner import (
    BitVector,
    TannerGraph,
    code_summary,
    extract_low_weight_codeword,
    induced_bits,
    is_codeword,
    is_codeword_supporting,
)

from conftest import fig1_graph


def _brute_kernel_size(rows, n):
    return sum(1 for x in range(1 << n) if gf2.mat_vec(rows, x) == 0)


rows_strategy = st.integers(1, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, (1 << n) - 1), min_size=0, max_size=6)))


@settings(max_examples=150, deadline=None)
@given(rows_strategy)
def test_rank_nullity_against_enumeration(data):
    n, rows = data
    r = gf2.rank(rows, n)
    basis = gf2.nullspace(rows, n)
    assert r + len(basis) == n
    assert _brute_kernel_size(rows, n) == 2 ** len(basis)
    for v in basis:
        assert gf2.mat_vec(rows, v) == 0


@settings(max_examples=100, deadline=None)
@given(rows_strategy)
def test_reverse_pivoting_gives_same_rank(data):
    n, rows = data
    assert gf2.rank(rows, n, reverse=True) == gf2.rank(rows, n)


def test_span_min_weight():
    assert gf2.span_min_weight([0b111, 0b110]) == 0b001
    with pytest.raises(ValueError):
        gf2.span_min_weight([])


def test_tanner_validation():
    with pytest.raises(InvalidArgument):
        TannerGraph(("a",), (1,), (("a", 2),))
    with pytest.raises(InvalidArgument):
        TannerGraph(("a",), (1,), (("a", 1), ("a", 1)))
    with pytest.raises(InvalidArgument):
        TannerGraph(("a",), ("a",), ())
    with pytest.raises(InvalidArgument):
        TannerGraph((), (1,), ())


def test_matrix_round_trip():
    H = np.array([[1, 1, 0, 1], [0, 1, 1, 1]])
    g = TannerGraph.from_matrix(H)
    assert (g.parity_check_matrix() == H).all()
    assert g.design_rate == Fraction(1, 2)
    s = code_summary(g)
    assert (s.rank, s.dimension, s.true_rate) == (2, 2, Fraction(1, 2))


def test_induced_bits_fig1():
    g = fig1_graph()
    assert induced_bits(g, {1, 2, 3, 4}) == {"a", "b", "c", "d", "e"}
    assert induced_bits(g, {1, 2}) == {"b"}
    assert induced_bits(g, {3}) == {"e"}
    # five induced bits on four checks
    assert is_codeword_supporting(g, {1, 2, 3, 4})
    assert not is_codeword_supporting(g, {1, 2, 4})


def test_induced_bits_four_on_four_is_not_supporting():
    g = TannerGraph.from_neighborhoods({"a": [1, 2, 4, 3], "b": [1, 2], "c": [2, 4], "d": [3, 4]}, [1, 2, 3, 4])
    assert induced_bits(g, {1, 2, 3, 4}) == {"a", "b", "c", "d"}
    assert not is_codeword_supporting(g, {1, 2, 3, 4})
    with pytest.raises(ContractViolation):
        extract_low_weight_codeword(g, {1, 2, 3, 4})


def test_extracted_codeword_weight_bound():
    g = fig1_graph()
    x = extract_low_weight_codeword(g, {1, 2, 3, 4})
    assert is_codeword(g, x)
    assert 0 < x.weight <= 5
    # brute force over all words supported on the induced bits
    best = min(
        BitVector.from_support(g, s).weight
        for k in range(1, 6)
        for s in itertools.combinations("abcde", k)
        if is_codeword(g, BitVector.from_support(g, s))
    )
    assert x.weight == best


def test_bitvector():
    g = fig1_graph()
    v = BitVector.from_support(g, ["b", "d"])
    assert v.to_list() == [0, 1, 0, 1, 0]
    assert v.support(g) == ["b", "d"]
    with pytest.raises(InvalidArgument):
        BitVector(2, 4)

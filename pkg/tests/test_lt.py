"""Rateless symbol stream: degrees, neighbor sampling, values, windowing."""

import numpy as np
import pytest
from scipy import stats

from raptorqkd.codec.lt import lt_degrees, lt_encode
from raptorqkd.degree import DegreeDistribution
from raptorqkd.rng import bits

UNIT = DegreeDistribution({1: 1.0}, 1)
MIXED = DegreeDistribution({1: 0.2, 2: 0.3, 3: 0.5}, 3)


def test_unit_degree_copies_single_bits():
    word = bits(4, 0, 50)
    block = lt_encode(word, UNIT, lt_seed=9, start=0, count=400, k_prime=50)
    assert np.array_equal(np.diff(block.row_ptr), np.ones(400, dtype=np.int64))
    assert np.array_equal(block.values, word[block.neighbors])


def test_all_zero_word_gives_zero_values():
    word = np.zeros(64, dtype=np.uint8)
    block = lt_encode(word, MIXED, lt_seed=1, start=0, count=300, k_prime=64)
    assert not block.values.any()


def test_degrees_follow_distribution():
    degs = lt_degrees(MIXED, lt_seed=5, start=0, count=30_000, k_prime=64)
    counts = np.bincount(degs, minlength=4)[1:4]
    expected = np.array([0.2, 0.3, 0.5]) * 30_000
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    assert chi2 < stats.chi2.ppf(0.999, df=2)


def test_degrees_capped_at_block_size():
    wide = DegreeDistribution({1: 0.5, 30: 0.5}, 30)
    degs = lt_degrees(wide, lt_seed=2, start=0, count=1000, k_prime=8)
    assert degs.max() <= 8


def test_neighbors_sorted_distinct_in_range():
    block = lt_encode(None, MIXED, lt_seed=77, start=0, count=2000, k_prime=40)
    assert block.values is None
    for i in range(2000):
        row = block.neighbors[block.row_ptr[i]:block.row_ptr[i + 1]]
        assert np.all(np.diff(row.astype(np.int64)) > 0)
        assert row.min() >= 0 and row.max() < 40


def test_neighbor_pairs_near_uniform():
    # degree-2 symbols over 16 bits: all 120 unordered pairs equally likely
    two = DegreeDistribution({2: 1.0}, 2)
    block = lt_encode(None, two, lt_seed=3, start=0, count=60_000, k_prime=16)
    pairs = block.neighbors.reshape(-1, 2)
    codes = pairs[:, 0].astype(np.int64) * 16 + pairs[:, 1]
    counts = np.bincount(codes, minlength=256)
    observed = counts[counts > 0]
    assert len(observed) == 120
    chi2 = float(((observed - 500.0) ** 2 / 500.0).sum())
    assert chi2 < stats.chi2.ppf(0.999, df=119)


def test_symbol_is_pure_function_of_index():
    word = bits(8, 0, 100)
    whole = lt_encode(word, MIXED, lt_seed=4, start=0, count=500, k_prime=100)
    # regenerate a window out of context
    window = lt_encode(word, MIXED, lt_seed=4, start=200, count=50, k_prime=100)
    lo, hi = whole.row_ptr[200], whole.row_ptr[250]
    assert np.array_equal(window.neighbors, whole.neighbors[lo:hi])
    assert np.array_equal(window.values, whole.values[200:250])
    assert window.start == 200


def test_values_are_neighbor_xor():
    word = bits(15, 0, 32)
    block = lt_encode(word, MIXED, lt_seed=6, start=0, count=500, k_prime=32)
    for i in range(500):
        row = block.neighbors[block.row_ptr[i]:block.row_ptr[i + 1]]
        assert block.values[i] == word[row].sum() % 2


def test_empty_block():
    block = lt_encode(None, MIXED, lt_seed=1, start=10, count=0, k_prime=16)
    assert block.count == 0
    assert block.max_degree == 0


def test_negative_count_rejected():
    with pytest.raises(ValueError):
        lt_encode(None, MIXED, lt_seed=1, start=0, count=-1, k_prime=16)


def test_index_dtype_tracks_block_size():
    small = lt_encode(None, UNIT, lt_seed=1, start=0, count=10, k_prime=1000)
    assert small.neighbors.dtype == np.uint16
    big = lt_encode(None, UNIT, lt_seed=1, start=0, count=10, k_prime=70_000)
    assert big.neighbors.dtype == np.uint32

"""Counter-based generator: determinism and distribution sanity."""

import numpy as np

from singmat.rng import (
    MASK64,
    Stream,
    bernoulli_threshold,
    derive_seed,
    mix64,
    u64_block,
    value_at,
)


def test_mix64_is_64_bit():
    for z in (0, 1, MASK64, 0xDEADBEEF):
        assert 0 <= mix64(z) <= MASK64


def test_stream_matches_value_at():
    s = Stream(12345)
    assert [s.next_u64() for _ in range(8)] == [value_at(12345, k) for k in range(8)]


def test_u64_block_matches_scalar():
    block = u64_block(987654321, 3, 16)
    assert [int(v) for v in block] == [value_at(987654321, 3 + k) for k in range(16)]
    assert block.dtype == np.uint64


def test_derive_seed_changes_stream():
    children = {derive_seed(42, i) for i in range(100)}
    assert len(children) == 100
    assert 42 not in children


def test_below_range_and_coverage():
    s = Stream(7)
    draws = [s.below(6) for _ in range(2000)]
    assert set(draws) == set(range(6))
    assert all(0 <= d < 6 for d in draws)


def test_below_one_consumes_one_draw():
    s = Stream(9)
    assert s.below(1) == 0
    assert s.counter == 1


def test_bernoulli_threshold_edges():
    assert bernoulli_threshold(0, 1) == 0
    assert bernoulli_threshold(1, 1) == 1 << 64
    assert bernoulli_threshold(1, 2) == 1 << 63


def test_bit_is_fair_ish():
    s = Stream(11)
    ones = sum(s.bit() for _ in range(4000))
    assert abs(ones - 2000) < 200  # 6+ sigma slack

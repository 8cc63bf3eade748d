from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cologne.errors import DomainError, UsageError
from cologne.randomness import SeedContext
from cologne.summaries import (
    CountSketch, FrequentSummary, cs_l2_estimate, cs_merge, cs_scale, cs_update,
    fs_heaviest, fs_merge, fs_update, merge_many, theory_capacity,
)


def fs(c, items):
    s = FrequentSummary(c)
    for k, w in items:
        fs_update(s, k, w)
    return s


def test_hand_simulated_stream():
    s = fs(2, [("a", 3), ("b", 2), ("c", 2)])
    assert s.entries == {"a": 1}
    assert 3 - 7 / 3 <= s.estimate("a") <= 3
    assert s.drained == 6  # 2 subtracted from each of three entries


def test_single_key_exact():
    s = fs(1, [("x", 2.5), ("x", 1.5)])
    assert s.estimate("x") == 4.0


def test_no_eviction_when_capacity_suffices():
    items = [(k, w) for k, w in zip("abcabdcd", [1, 2, 3, 4, 5, 6, 7, 8])]
    s = fs(4, items)
    truth = Counter()
    for k, w in items:
        truth[k] += w
    assert s.entries == dict(truth)


def test_negative_update_rejected():
    with pytest.raises(DomainError):
        FrequentSummary(3).update("a", -1)
    with pytest.raises(DomainError):
        FrequentSummary(0)


def test_merge_examples():
    a = fs(3, [("a", 1), ("b", 2)])
    assert fs_merge(a, FrequentSummary(3)).entries == a.entries
    assert fs_merge(fs(3, [("a", 1)]), fs(3, [("b", 2), ("c", 4)])).entries == {"a": 1, "b": 2, "c": 4}
    m = fs_merge(fs(1, [("a", 5)]), fs(1, [("b", 3)]))
    assert m.entries == {"a": 2}
    assert 5 - 2 <= (5 + 3) / 2
    with pytest.raises(UsageError):
        fs_merge(FrequentSummary(1), FrequentSummary(2))


def test_heaviest():
    assert fs_heaviest(fs(3, [("a", 1), ("b", 4)])) == ("b", 4)
    assert fs_heaviest(FrequentSummary(3)) is None
    assert fs_heaviest(fs(3, [(7, 4), (3, 4)])) == (3, 4)


def test_merge_many_scales():
    a, b = fs(5, [(0, 1.0)]), fs(5, [(0, 2.0), (1, 1.0)])
    m = merge_many([a, b], [1.0, 0.5])
    assert m.entries == {0: 2.0, 1: 0.5}
    assert merge_many([a, b], [1.0, 0.0]).entries == {0: 1.0}


def test_theory_capacity():
    assert theory_capacity(1024) == 21


streams = st.lists(
    st.tuples(st.integers(0, 12), st.floats(0.0, 10.0, allow_nan=False)), min_size=0, max_size=60
)


def _check_bound(s, truth):
    W = sum(truth.values())
    for key in set(truth) | set(s.entries):
        est, true = s.estimate(key), truth.get(key, 0.0)
        assert est <= true + 1e-9 * max(1.0, W)
        assert est >= true - s.error_bound - 1e-9 * max(1.0, W)
        assert s.error_bound <= W / (s.capacity + 1) + 1e-9 * max(1.0, W)
    assert len(s) <= s.capacity


@settings(max_examples=200)
@given(streams, st.sampled_from([1, 2, 5, 10]), st.randoms(use_true_random=False))
def test_bound_under_random_interleaving(items, c, rnd):
    truth = Counter()
    parts = [FrequentSummary(c)]
    for key, w in items:
        truth[key] += w
        if rnd.random() < 0.2:
            parts.append(FrequentSummary(c))
        parts[-1].update(key, w)
    while len(parts) > 1:
        i, j = sorted(rnd.sample(range(len(parts)), 2))
        b, a = parts.pop(j), parts.pop(i)
        parts.append(fs_merge(a, b))
    _check_bound(parts[0], truth)


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(1, 9)), max_size=30),
       st.lists(st.tuples(st.integers(0, 6), st.integers(1, 9)), max_size=30))
def test_merge_exact_when_capacity_covers_keys(xs, ys):
    a, b = fs(7, xs), fs(7, ys)
    truth = Counter()
    for k, w in xs + ys:
        truth[k] += w
    assert fs_merge(a, b).entries == dict(truth)
    assert fs_merge(a, b).entries == fs_merge(b, a).entries


def int_vec(rng, dim=200):
    return rng.integers(-50, 51, dim).astype(float)


def test_countsketch_linearity_exact():
    rng = np.random.default_rng(0)
    ctx = SeedContext(3, 1)
    x, y = int_vec(rng), int_vec(rng)
    keys = np.arange(200)
    sx = CountSketch.of_vector(keys, x, 5, 64, ctx)
    sy = CountSketch.of_vector(keys, y, 5, 64, ctx)
    assert np.array_equal(cs_merge(sx, sy).counters, CountSketch.of_vector(keys, x + y, 5, 64, ctx).counters)
    assert np.array_equal(cs_scale(sx, 3.0).counters, CountSketch.of_vector(keys, 3 * x, 5, 64, ctx).counters)
    assert not cs_scale(sx, 0.0).counters.any()
    before = sx.counters.copy()
    cs_update(sx, 5, 0.0)
    assert np.array_equal(before, sx.counters)


def test_countsketch_shape_mismatch():
    with pytest.raises(UsageError):
        CountSketch(5, 10, SeedContext(1)).merge(CountSketch(5, 11, SeedContext(1)))
    with pytest.raises(UsageError):
        CountSketch(5, 10, SeedContext(1)).merge(CountSketch(5, 10, SeedContext(2)))


def test_l2_estimate_trivial_cases():
    assert cs_l2_estimate(CountSketch.of_vector([17], [5.0])) == 5.0
    assert cs_l2_estimate(CountSketch()) == 0.0


def test_l2_estimate_accuracy():
    rng = np.random.default_rng(1)
    ok = 0
    for t in range(200):
        x = rng.normal(size=200)
        est = cs_l2_estimate(CountSketch.of_vector(np.arange(200), x, 5, 400, SeedContext(t, 0)))
        ok += abs(est / np.linalg.norm(x) - 1) <= 0.15
    assert ok >= 190

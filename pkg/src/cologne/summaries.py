"""Mergeable sketches: a weighted Frequent (Misra-Gries) summary and CountSketch."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .errors import DomainError, UsageError
from .randomness import SeedContext, _hash

DEFAULT_CAPACITY = 10


def theory_capacity(n: int) -> int:
    """Capacity ``2 * ceil(log2 n) + 1`` used when following the heavy-hitter analysis."""
    return 2 * math.ceil(math.log2(max(n, 2))) + 1


@dataclass
class FrequentSummary:
    """Weighted Misra-Gries summary holding at most ``capacity`` keys.

    For every key ``x``: ``true(x) - drained / (capacity + 1) <= estimate(x) <= true(x)``,
    and ``drained`` never exceeds the total weight ever added, which gives the
    usual ``W / (capacity + 1)`` error bound.
    """

    capacity: int = DEFAULT_CAPACITY
    entries: dict = field(default_factory=dict)
    drained: float = 0.0

    def __post_init__(self):
        if self.capacity < 1:
            raise DomainError("capacity must be at least 1")

    def __len__(self):
        return len(self.entries)

    def estimate(self, key) -> float:
        return self.entries.get(key, 0.0)

    @property
    def error_bound(self) -> float:
        return self.drained / (self.capacity + 1)

    def update(self, key: Hashable, w: float = 1.0) -> "FrequentSummary":
        """Add ``w >= 0`` to ``key``; on overflow subtract the minimum weight from every entry."""
        if w < 0:
            raise DomainError("Frequent summaries only accept nonnegative updates")
        if w == 0:
            return self
        e = self.entries
        e[key] = e.get(key, 0.0) + w
        if len(e) > self.capacity:
            m = min(e.values())
            self.drained += m * len(e)
            self.entries = {x: v - m for x, v in e.items() if v - m > 0}
        return self

    def heaviest(self):
        """``(key, weight)`` of the largest entry, smaller key on ties; ``None`` when empty."""
        if not self.entries:
            return None
        return min(self.entries.items(), key=lambda kv: (-kv[1], kv[0]))

    def copy(self) -> "FrequentSummary":
        return FrequentSummary(self.capacity, dict(self.entries), self.drained)


def merge_many(
    summaries: Sequence[FrequentSummary],
    scales: Sequence[float] | None = None,
    capacity: int | None = None,
) -> FrequentSummary:
    """Keywise sum of ``scale_i * summary_i`` reduced back to capacity.

    If more than ``capacity`` keys survive, the ``(capacity+1)``-th largest
    weight is subtracted from every entry and non-positive entries dropped.
    Contributions are accumulated in input order, which the compiled
    propagation kernel reproduces bit for bit.
    """
    if capacity is None:
        if not summaries:
            raise UsageError("capacity required when merging zero summaries")
        capacity = summaries[0].capacity
    if any(s.capacity != capacity for s in summaries):
        raise UsageError("cannot merge summaries with different capacities")
    if scales is None:
        scales = [1.0] * len(summaries)
    acc: dict = {}
    drained = 0.0
    for s, lam in zip(summaries, scales):
        if lam < 0:
            raise DomainError("merge scales must be nonnegative")
        drained += lam * s.drained
        for key, w in s.entries.items():
            acc[key] = acc.get(key, 0.0) + lam * w
    acc = {x: v for x, v in acc.items() if v > 0}
    if len(acc) > capacity:
        delta = sorted(acc.values(), reverse=True)[capacity]
        drained += sum(min(v, delta) for v in acc.values())
        acc = {x: v - delta for x, v in acc.items() if v - delta > 0}
    return FrequentSummary(capacity, acc, drained)


def fs_update(s: FrequentSummary, key, w: float) -> FrequentSummary:
    return s.update(key, w)


def fs_merge(a: FrequentSummary, b: FrequentSummary) -> FrequentSummary:
    if a.capacity != b.capacity:
        raise UsageError(f"capacity mismatch: {a.capacity} vs {b.capacity}")
    return merge_many([a, b])


def fs_heaviest(s: FrequentSummary):
    return s.heaviest()


_CS_STREAM = 0x43530000


def countsketch_hashes(ctx: SeedContext, rows: int, width: int, keys) -> tuple[np.ndarray, np.ndarray]:
    """Bucket indices and +/-1 signs, each of shape ``(rows, len(keys))``."""
    keys = np.asarray(keys, dtype=np.int64)
    h = np.stack([_hash(ctx.global_seed, ctx.repetition, _CS_STREAM + r, keys) for r in range(rows)])
    buckets = (h % np.uint64(width)).astype(np.int64)
    signs = np.where((h >> np.uint64(63)) == 1, -1.0, 1.0)
    return buckets, signs


def default_width(epsilon: float) -> int:
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must lie in (0, 1)")
    return math.ceil(1.0 / epsilon**2)


@dataclass
class CountSketch:
    """Linear sketch of a real vector: ``rows x width`` signed counters."""

    rows: int = 5
    width: int = 100
    ctx: SeedContext = field(default_factory=SeedContext)
    counters: np.ndarray = None

    def __post_init__(self):
        if self.rows < 1 or self.width < 1:
            raise DomainError("CountSketch needs rows >= 1 and width >= 1")
        if self.counters is None:
            self.counters = np.zeros((self.rows, self.width))
        elif self.counters.shape != (self.rows, self.width):
            raise UsageError("counter array has the wrong shape")

    @classmethod
    def of_vector(cls, keys, values, rows=5, width=100, ctx=None) -> "CountSketch":
        cs = cls(rows, width, ctx or SeedContext())
        cs.update_many(keys, values)
        return cs

    def update(self, key: int, w: float) -> "CountSketch":
        return self.update_many([key], [w])

    def update_many(self, keys, values) -> "CountSketch":
        keys = np.asarray(keys, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        b, s = countsketch_hashes(self.ctx, self.rows, self.width, keys)
        for r in range(self.rows):
            np.add.at(self.counters[r], b[r], s[r] * values)
        return self

    def compatible(self, other: "CountSketch") -> bool:
        return (self.rows, self.width, self.ctx) == (other.rows, other.width, other.ctx)

    def merge(self, other: "CountSketch") -> "CountSketch":
        if not self.compatible(other):
            raise UsageError("CountSketches differ in shape or seed")
        return CountSketch(self.rows, self.width, self.ctx, self.counters + other.counters)

    def scale(self, lam: float) -> "CountSketch":
        return CountSketch(self.rows, self.width, self.ctx, self.counters * lam)

    def l2_estimate(self) -> float:
        return l2_from_counters(self.counters)


def l2_from_counters(counters: np.ndarray) -> float | np.ndarray:
    """Median over rows of the per-row counter 2-norm; accepts a leading batch axis."""
    return np.median(np.sqrt(np.sum(counters**2, axis=-1)), axis=-1)


def cs_update(s: CountSketch, key: int, w: float) -> CountSketch:
    return s.update(key, w)


def cs_merge(a: CountSketch, b: CountSketch) -> CountSketch:
    return a.merge(b)


def cs_scale(s: CountSketch, lam: float) -> CountSketch:
    return s.scale(lam)


def cs_l2_estimate(s: CountSketch) -> float:
    return float(s.l2_estimate())

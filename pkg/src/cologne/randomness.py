"""Keyed, stateless randomness shared by every node's sampling run.

Every value is a pure function of ``(global_seed, repetition, stream, entity)``
computed with a splitmix64-style avalanche mixer, so two nodes that look up the
same neighbor within one :class:`SeedContext` see bit-identical randomness.
That sharing is what makes the samples coordinated.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_U64 = np.uint64
_MASK = (1 << 64) - 1
_TWO_NEG_64 = 2.0 ** -64

# stream tags keep node, attribute and walk draws mutually independent
NODE, ATTRIBUTE, WALK = 0x4E4F4445, 0x41545452, 0x57414C4B


def _mix(x: np.ndarray) -> np.ndarray:
    x = x + _U64(0x9E3779B97F4A7C15)
    x = (x ^ (x >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> _U64(27))) * _U64(0x94D049BB133111EB)
    return x ^ (x >> _U64(31))


def _hash(seed: int, repetition, stream: int, entity) -> np.ndarray:
    with np.errstate(over="ignore"):
        h = _mix(np.asarray(seed & _MASK, dtype=_U64))
        h = _mix(h ^ np.asarray(repetition, dtype=np.int64).astype(_U64))
        h = _mix(h ^ _U64(stream))
        return _mix(h ^ np.asarray(entity, dtype=np.int64).astype(_U64))


@dataclass(frozen=True)
class SeedContext:
    global_seed: int = 42
    repetition: int = 0

    def node_ranks(self, n: int) -> np.ndarray:
        """``node_rank`` for nodes ``0..n-1`` as a uint64 array."""
        return _hash(self.global_seed, self.repetition, NODE, np.arange(n))

    def node_uniforms(self, n: int) -> np.ndarray:
        return _to_unit(self.node_ranks(n))


def node_rank(ctx: SeedContext, u) -> int | np.ndarray:
    """Uniform 64-bit rank of node ``u`` (scalar in, int out; array in, uint64 array out)."""
    h = _hash(ctx.global_seed, ctx.repetition, NODE, u)
    return int(h) if np.ndim(h) == 0 else h


def _to_unit(ranks: np.ndarray) -> np.ndarray:
    # (rank + 1) / 2^64, lands in (0, 1]
    return (ranks.astype(np.float64) + 1.0) * _TWO_NEG_64


def node_uniform(ctx: SeedContext, u) -> float | np.ndarray:
    """Uniform draw in (0, 1] keyed by ``(ctx, u)``."""
    r = _to_unit(np.asarray(_hash(ctx.global_seed, ctx.repetition, NODE, u)))
    return float(r) if r.ndim == 0 else r


def attribute_uniform(ctx: SeedContext, a):
    r = _to_unit(np.asarray(_hash(ctx.global_seed, ctx.repetition, ATTRIBUTE, a)))
    return float(r) if r.ndim == 0 else r


def attribute_rank(ctx: SeedContext, a, w):
    """Exponential-race rank ``-ln(u_a) / w``; the smallest rank is a weighted minwise sample.

    ``u_a`` depends on ``(ctx, a)`` only, never on the node holding ``a``.
    """
    w = np.asarray(w, dtype=np.float64)
    if np.any(~(w > 0)):
        raise DomainError("attribute weight must be positive")
    r = -np.log(attribute_uniform(ctx, a)) / w
    return float(r) if np.ndim(r) == 0 else r


def walk_uniforms(ctx: SeedContext, nodes: np.ndarray, step: int) -> np.ndarray:
    """Independent per-(start node, step) draws in (0, 1] for random walks."""
    nodes = np.asarray(nodes, dtype=np.int64)
    return _to_unit(_hash(ctx.global_seed, ctx.repetition, WALK + (step << 32), nodes))


def attribute_rank_table(global_seed: int, repetitions, attrs, weights) -> np.ndarray:
    """``attribute_rank`` for every (attribute entry, repetition) pair, shape (len(attrs), len(repetitions))."""
    weights = np.asarray(weights, dtype=np.float64)
    if np.any(~(weights > 0)):
        raise DomainError("attribute weight must be positive")
    reps = np.asarray(list(repetitions), dtype=np.int64)
    h = _hash(global_seed, reps[None, :], ATTRIBUTE, np.asarray(attrs, dtype=np.int64)[:, None])
    return -np.log(_to_unit(h)) / weights[:, None]

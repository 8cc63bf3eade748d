"""Coordinated neighborhood samplers built on the propagate-and-merge template.

Every node starts with a sketch holding itself; for ``k`` rounds each node
rebuilds its sketch from its own seed entry and its out-neighbors' sketches
of the previous round (double-buffered, so node order never matters); the
sample is then read off each node's sketch.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError
from .graph import Graph
from .randomness import SeedContext, walk_uniforms
from .summaries import FrequentSummary, countsketch_hashes, default_width, l2_from_counters, merge_many

METHODS = ("l0", "l1", "l2", "rw")
MODES = ("argmax", "threshold")
RECURRENCES = ("canonical", "binomial")
MISSING = -1


@dataclass(frozen=True)
class SamplerConfig:
    """Sampler parameters.

    ``recurrence="canonical"`` propagates ``f^k_u = e_u + sum_v decay * w(u,v) * f^{k-1}_v``
    (rows of ``sum_i decay^i A^i``); ``"binomial"`` keeps the previous own vector
    instead of re-seeding, which yields rows of ``(I + decay * A)^k``.
    """

    method: str = "l0"
    k: int = 2
    capacity: int = 10
    mode: str = "argmax"
    decay: float = 1.0
    epsilon: float = 0.1
    sketch_rows: int = 5
    use_node_weights: bool = True
    use_edge_weights: bool = True
    recurrence: str = "canonical"
    l2_norm: str = "sketch"

    def __post_init__(self):
        method = self.method.lower()
        object.__setattr__(self, "method", method)
        if method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if self.mode not in MODES:
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.recurrence not in RECURRENCES:
            raise DomainError(f"unknown recurrence {self.recurrence!r}")
        if self.l2_norm not in ("sketch", "exact"):
            raise DomainError("l2_norm must be 'sketch' or 'exact'")
        if self.k < 0:
            raise DomainError("k must be nonnegative")
        if self.capacity < 1:
            raise DomainError("capacity must be at least 1")
        if not 0.0 <= self.decay <= 1.0:
            raise DomainError("decay must lie in [0, 1]")
        if not 0.0 < self.epsilon < 1.0:
            raise DomainError("epsilon must lie in (0, 1)")

    @property
    def p(self) -> int:
        return {"l1": 1, "l2": 2}.get(self.method, 0)

    @property
    def sketch_width(self) -> int:
        return default_width(self.epsilon)


@dataclass
class SampleVector:
    """One coordinated sample per node; ``MISSING`` (-1) marks threshold misses."""

    samples: np.ndarray
    weights: np.ndarray = None

    def __post_init__(self):
        if self.weights is None:
            self.weights = np.zeros(len(self.samples))

    def __len__(self):
        return len(self.samples)

    def __getitem__(self, u):
        s = int(self.samples[u])
        return None if s == MISSING else s


@dataclass
class WeightedState:
    """Per-node Frequent summaries as padded arrays (``keys[u, :lens[u]]``)."""

    keys: np.ndarray
    weights: np.ndarray
    lens: np.ndarray
    capacity: int
    counters: np.ndarray | None = None  # (n, rows, width) CountSketch of f_u when requested

    def summary(self, u: int) -> FrequentSummary:
        ln = self.lens[u]
        return FrequentSummary(
            self.capacity, dict(zip(self.keys[u, :ln].tolist(), self.weights[u, :ln].tolist()))
        )


def _positions(ranks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Order nodes by (rank, id); return order and each node's position in it."""
    order = np.lexsort((np.arange(len(ranks)), ranks))
    pos = np.empty_like(order)
    pos[order] = np.arange(len(order))
    return order, pos


def _min_rounds(g: Graph, cur: np.ndarray, k: int) -> np.ndarray:
    """``k`` rounds of ``cur[u] = min(cur[u], min_{v in N(u)} cur[v])`` over a (n, d) array."""
    starts = g.indptr[:-1]
    nonempty = np.flatnonzero(np.diff(g.indptr) > 0)
    if len(nonempty) == 0:
        return cur
    for _ in range(k):
        red = np.minimum.reduceat(cur[g.indices], starts[nonempty], axis=0)
        nxt = cur.copy()
        nxt[nonempty] = np.minimum(cur[nonempty], red)
        cur = nxt
    return cur


def l0_columns(g: Graph, k: int, seed: int, repetitions, chunk: int = 16) -> np.ndarray:
    """Minwise samples for many repetitions at once; returns an (n, len(repetitions)) array."""
    repetitions = list(repetitions)
    out = np.empty((g.n, len(repetitions)), dtype=np.int64)
    for lo in range(0, len(repetitions), chunk):
        reps = repetitions[lo:lo + chunk]
        orders, cur = [], np.empty((g.n, len(reps)), dtype=np.int64)
        for j, rep in enumerate(reps):
            order, pos = _positions(SeedContext(seed, rep).node_ranks(g.n))
            orders.append(order)
            cur[:, j] = pos
        cur = _min_rounds(g, cur, k)
        for j, order in enumerate(orders):
            out[:, lo + j] = order[cur[:, j]]
    return out


def propagate_l0(g: Graph, ctx: SeedContext, k: int) -> SampleVector:
    """Each node keeps the minimum-rank node of its k-hop ball (ties: smaller id)."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    ranks = ctx.node_ranks(g.n)
    order, pos = _positions(ranks)
    cur = _min_rounds(g, pos.reshape(-1, 1), k)[:, 0]
    s = order[cur]
    return SampleVector(s, ranks[s].astype(np.float64))


def _uniforms(g: Graph, ctx: SeedContext, r) -> np.ndarray:
    if r is None:
        return ctx.node_uniforms(g.n)
    if callable(r):
        return np.asarray([r(u) for u in range(g.n)], dtype=np.float64)
    r = np.broadcast_to(np.asarray(r, dtype=np.float64), (g.n,)).copy()
    if np.any(r <= 0) or np.any(r > 1):
        raise DomainError("injected uniforms must lie in (0, 1]")
    return r


def seed_weights(g: Graph, ctx: SeedContext, cfg: SamplerConfig, r=None) -> np.ndarray:
    """Initial entry of each node: ``node_weight(u) / r_u^(1/p)``."""
    nw = g.node_weight_array(cfg.use_node_weights)
    u = _uniforms(g, ctx, r)
    return nw / u if cfg.p == 1 else nw / np.sqrt(u)


def _edge_scale(g: Graph, cfg: SamplerConfig) -> np.ndarray:
    ew = g.edge_weight_array(cfg.use_edge_weights)
    return ew if cfg.decay == 1.0 else cfg.decay * ew


def propagate_weighted(
    g: Graph,
    ctx: SeedContext,
    cfg: SamplerConfig,
    r=None,
    backend: str = "compiled",
    with_sketch: bool | None = None,
) -> WeightedState:
    """Propagate Frequent summaries of the reweighted k-hop vectors.

    ``r`` optionally injects the per-node uniforms (scalar, array or callable),
    e.g. ``r=1.0`` to observe raw walk counts. ``backend="python"`` runs the
    same rounds with :class:`FrequentSummary` objects and :func:`merge_many`.
    """
    if cfg.method not in ("l1", "l2"):
        raise DomainError("weighted propagation needs method l1 or l2")
    if np.any(g.edge_weight_array(cfg.use_edge_weights) < 0):
        raise DomainError("negative edge weights are not supported")
    seed = seed_weights(g, ctx, cfg, r)
    scale = _edge_scale(g, cfg)
    carry = cfg.recurrence == "binomial"
    c = cfg.capacity
    n = g.n
    if backend == "compiled":
        keys = np.zeros((n, c), dtype=np.int64)
        w = np.zeros((n, c))
        lens = np.zeros(n, dtype=np.int64)
        live = seed > 0
        keys[:, 0] = np.arange(n)
        w[live, 0] = seed[live]
        lens[live] = 1
        nk, nw_, nl = np.zeros_like(keys), np.zeros_like(w), np.zeros_like(lens)
        pos = np.full(n, -1, dtype=np.int64)
        for _ in range(cfg.k):
            _kernels.weighted_round(g.indptr, g.indices, scale, keys, w, lens,
                                    seed, carry, c, nk, nw_, nl, pos)
            keys, nk = nk, keys
            w, nw_ = nw_, w
            lens, nl = nl, lens
        state = WeightedState(keys, w, lens, c)
    elif backend == "python":
        state = _propagate_python(g, seed, scale, cfg)
    else:
        raise DomainError(f"unknown backend {backend!r}")
    if with_sketch is None:
        with_sketch = cfg.method == "l2" and cfg.mode == "threshold" and cfg.l2_norm == "sketch"
    if with_sketch:
        state.counters = propagate_countsketch(g, ctx, cfg)
    return state


def _propagate_python(g: Graph, seed: np.ndarray, scale: np.ndarray, cfg: SamplerConfig) -> WeightedState:
    c = cfg.capacity
    init = [FrequentSummary(c, {u: float(seed[u])} if seed[u] > 0 else {}) for u in range(g.n)]
    cur = init
    scale = scale.tolist()
    for _ in range(cfg.k):
        nxt = []
        for u in range(g.n):
            first = cur[u] if cfg.recurrence == "binomial" else init[u]
            lo, hi = g.indptr[u], g.indptr[u + 1]
            parts = [first] + [cur[v] for v in g.indices[lo:hi].tolist()]
            nxt.append(merge_many(parts, [1.0] + scale[lo:hi], capacity=c))
        cur = nxt
    keys = np.zeros((g.n, c), dtype=np.int64)
    w = np.zeros((g.n, c))
    lens = np.zeros(g.n, dtype=np.int64)
    for u, s in enumerate(cur):
        lens[u] = len(s)
        keys[u, :len(s)] = list(s.entries)
        w[u, :len(s)] = list(s.entries.values())
    return WeightedState(keys, w, lens, c)


def _propagate_linear(g: Graph, cfg: SamplerConfig, init: np.ndarray) -> np.ndarray:
    """``k`` rounds of the walk-count recurrence applied to columns of ``init``."""
    a = g.adjacency(cfg.use_edge_weights)
    if cfg.decay != 1.0:
        a = a * cfg.decay
    cur = init
    for _ in range(cfg.k):
        base = cur if cfg.recurrence == "binomial" else init
        cur = base + a @ cur
    return cur


def propagate_countsketch(g: Graph, ctx: SeedContext, cfg: SamplerConfig) -> np.ndarray:
    """CountSketch of every node's (un-reweighted) k-hop vector, shape (n, rows, width).

    Built by linearity: each node seeds its own signed counter and sums its
    neighbors' sketches, exactly as the frequency vectors themselves are summed.
    """
    rows, width = cfg.sketch_rows, cfg.sketch_width
    nw = g.node_weight_array(cfg.use_node_weights)
    b, s = countsketch_hashes(ctx, rows, width, np.arange(g.n))
    init = np.zeros((g.n, rows * width))
    for row in range(rows):
        init[np.arange(g.n), row * width + b[row]] = s[row] * nw
    return _propagate_linear(g, cfg, init).reshape(g.n, rows, width)


def exact_walk_count_norm(
    g: Graph,
    k: int,
    decay: float = 1.0,
    use_node_weights: bool = True,
    use_edge_weights: bool = True,
    recurrence: str = "canonical",
) -> np.ndarray:
    """Exact ``||f^k_u||_1`` for every node via the scalar recurrence, O(mk)."""
    cfg = SamplerConfig(method="l1", k=k, decay=decay, use_node_weights=use_node_weights,
                        use_edge_weights=use_edge_weights, recurrence=recurrence)
    nw = g.node_weight_array(use_node_weights)
    return _propagate_linear(g, cfg, nw.reshape(-1, 1))[:, 0]


def _exact_l2_norms(g: Graph, cfg: SamplerConfig) -> np.ndarray:
    from .oracle import exact_frequency_vectors

    vecs = exact_frequency_vectors(g, cfg.k, cfg.decay, cfg.use_node_weights,
                                   cfg.use_edge_weights, recurrence=cfg.recurrence)
    return np.array([np.sqrt(sum(x * x for x in fv.entries.values())) for fv in vecs])


def sample_lp(g: Graph, ctx: SeedContext, cfg: SamplerConfig, r=None) -> SampleVector:
    """L1/L2 samples: heaviest summary entry (argmax) or the unique entry past the norm threshold."""
    if cfg.method not in ("l1", "l2"):
        raise DomainError("sample_lp needs method l1 or l2")
    state = propagate_weighted(g, ctx, cfg, r)
    if cfg.mode == "argmax":
        best, bw = _kernels.heaviest_rows(state.keys, state.weights, state.lens)
        return SampleVector(best, bw)
    if cfg.method == "l1":
        t = exact_walk_count_norm(g, cfg.k, cfg.decay, cfg.use_node_weights,
                                  cfg.use_edge_weights, cfg.recurrence)
    elif cfg.l2_norm == "exact":
        t = _exact_l2_norms(g, cfg)
    else:
        t = l2_from_counters(state.counters)
    best, bw = _kernels.threshold_rows(state.keys, state.weights, state.lens, np.asarray(t, dtype=np.float64))
    return SampleVector(best, bw)


def _walk(g: Graph, ctx: SeedContext, k: int, starts: np.ndarray, use_edge_weights: bool = True) -> np.ndarray:
    cur = starts.copy()
    if g.num_entries == 0:
        return cur
    weighted = use_edge_weights and g.weighted
    if weighted:
        cw = np.cumsum(g.edge_weights)
        cw0 = np.concatenate([[0.0], cw])
    for step in range(k):
        lo, hi = g.indptr[cur], g.indptr[cur + 1]
        u = walk_uniforms(ctx, starts, step)
        if weighted:
            base, total = cw0[lo], cw0[hi] - cw0[lo]
            live = total > 0
            idx = np.searchsorted(cw, base + u * total, side="left")
        else:
            live = hi > lo
            idx = lo + np.floor(u * (hi - lo)).astype(np.int64)
        idx = np.clip(idx, lo, np.maximum(hi - 1, lo))
        idx = np.minimum(idx, g.num_entries - 1)
        cur = np.where(live, g.indices[idx], cur)
    return cur


def random_walk_sample(g: Graph, ctx: SeedContext, k: int, u: int, use_edge_weights: bool = True) -> int:
    """End node of a k-step walk from ``u``; dead ends stop the walk where it is."""
    g._check(u)
    return int(_walk(g, ctx, k, np.array([u]), use_edge_weights)[0])


def random_walk_samples(g: Graph, ctx: SeedContext, k: int, use_edge_weights: bool = True) -> SampleVector:
    return SampleVector(_walk(g, ctx, k, np.arange(g.n), use_edge_weights))


def sample(g: Graph, ctx: SeedContext, cfg: SamplerConfig, r=None) -> SampleVector:
    """Dispatch on ``cfg.method``."""
    if cfg.method == "l0":
        return propagate_l0(g, ctx, cfg.k)
    if cfg.method == "rw":
        return random_walk_samples(g, ctx, cfg.k, cfg.use_edge_weights)
    return sample_lp(g, ctx, cfg, r)


def sample_columns(g: Graph, cfg: SamplerConfig, seed: int, repetitions, r=None) -> np.ndarray:
    """Samples for every node and repetition as an (n, len(repetitions)) array."""
    repetitions = list(repetitions)
    if cfg.method == "l0":
        return l0_columns(g, cfg.k, seed, repetitions)
    out = np.empty((g.n, len(repetitions)), dtype=np.int64)
    for j, rep in enumerate(repetitions):
        out[:, j] = sample(g, SeedContext(seed, rep), cfg, r).samples
    return out

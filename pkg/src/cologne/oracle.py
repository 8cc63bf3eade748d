"""Brute-force references: exact walk-count vectors, similarities, Monte-Carlo harnesses.

Everything here is deliberately naive and guarded by explicit size limits.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResourceError
from .graph import Graph
from .randomness import SeedContext
from .samplers import MISSING, SampleVector, SamplerConfig, _uniforms, sample_columns

MAX_NODES = 2000
MAX_ENTRIES = 5_000_000
MAX_WALKS = 1_000_000


@dataclass
class FrequencyVector:
    """Sparse walk-count vector of ``owner``: node -> (weighted) number of walks of length <= k."""

    owner: int
    k: int
    entries: dict = field(default_factory=dict)

    def norm(self, p: int = 1) -> float:
        return float(sum(abs(x) ** p for x in self.entries.values()) ** (1.0 / p))

    def dense(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        for x, c in self.entries.items():
            out[x] = c
        return out


def _guard_nodes(g: Graph, limit: int):
    if g.n > limit:
        raise ResourceError(f"graph has {g.n} nodes, oracle limit is {limit}")


def exact_frequency_vectors(
    g: Graph,
    k: int,
    decay: float = 1.0,
    use_node_weights: bool = True,
    use_edge_weights: bool = True,
    recurrence: str = "canonical",
    max_nodes: int = MAX_NODES,
    max_entries: int = MAX_ENTRIES,
) -> list[FrequencyVector]:
    """Dictionary DP over the walk-count recurrence; zero entries are dropped."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    _guard_nodes(g, max_nodes)
    nw = g.node_weight_array(use_node_weights).tolist()
    ew = g.edge_weight_array(use_edge_weights).tolist()
    init = [{u: nw[u]} if nw[u] > 0 else {} for u in range(g.n)]
    cur = init
    for _ in range(k):
        nxt, total = [], 0
        for u in range(g.n):
            acc = dict(cur[u] if recurrence == "binomial" else init[u])
            for e in range(g.indptr[u], g.indptr[u + 1]):
                s = decay * ew[e]
                for x, c in cur[int(g.indices[e])].items():
                    acc[x] = acc.get(x, 0.0) + s * c
            acc = {x: c for x, c in acc.items() if c > 0}
            total += len(acc)
            if total > max_entries:
                raise ResourceError(f"frequency vectors exceed {max_entries} entries")
            nxt.append(acc)
        cur = nxt
    return [FrequencyVector(u, k, cur[u]) for u in range(g.n)]


def walk_enumeration(
    g: Graph,
    u: int,
    k: int,
    decay: float = 1.0,
    use_node_weights: bool = True,
    use_edge_weights: bool = True,
    max_walks: int = MAX_WALKS,
) -> FrequencyVector:
    """List every walk of length <= k from ``u`` and tally its end node."""
    g._check(u)
    nw = g.node_weight_array(use_node_weights).tolist()
    ew = g.edge_weight_array(use_edge_weights).tolist()
    counts: dict = {}
    walks = 0
    stack = [(u, 0, 1.0)]
    while stack:
        x, depth, w = stack.pop()
        walks += 1
        if walks > max_walks:
            raise ResourceError(f"more than {max_walks} walks from node {u}")
        counts[x] = counts.get(x, 0.0) + w * nw[x]
        if depth < k:
            for e in range(g.indptr[x], g.indptr[x + 1]):
                stack.append((int(g.indices[e]), depth + 1, w * decay * ew[e]))
    return FrequencyVector(u, k, {x: c for x, c in counts.items() if c > 0})


def matrix_power_frequencies(
    g: Graph,
    k: int,
    decay: float = 1.0,
    use_node_weights: bool = True,
    use_edge_weights: bool = True,
    max_nodes: int = MAX_NODES,
) -> np.ndarray:
    """Dense ``(sum_i decay^i A^i) diag(node_weights)``; row u is f^k_u."""
    _guard_nodes(g, max_nodes)
    a = g.adjacency(use_edge_weights).toarray()
    power = np.eye(g.n)
    total = np.eye(g.n)
    for i in range(1, k + 1):
        power = power @ a
        total = total + decay**i * power
    return total * g.node_weight_array(use_node_weights)[None, :]


def jaccard_khop(g: Graph, u: int, v: int, k: int) -> float:
    a, b = g.khop_set(u, k), g.khop_set(v, k)
    return len(a & b) / len(a | b)


def minratio_from_vectors(fu: FrequencyVector, fv: FrequencyVector, p: int) -> float:
    nu, nv = fu.norm(p) ** p, fv.norm(p) ** p
    if nu == 0 or nv == 0:
        return 0.0
    common = fu.entries.keys() & fv.entries.keys()
    total = sum(min(fu.entries[x] ** p / nu, fv.entries[x] ** p / nv) for x in common)
    return min(1.0, float(total))  # rounding can push a true 1 just past it


def cosine_from_vectors(fu: FrequencyVector, fv: FrequencyVector) -> float:
    nu, nv = fu.norm(2), fv.norm(2)
    if nu == 0 or nv == 0:
        return 0.0
    common = fu.entries.keys() & fv.entries.keys()
    return float(sum(fu.entries[x] * fv.entries[x] for x in common) / (nu * nv))


def sqrt_cosine_from_vectors(fu: FrequencyVector, fv: FrequencyVector) -> float:
    nu, nv = fu.norm(1), fv.norm(1)
    if nu == 0 or nv == 0:
        return 0.0
    common = fu.entries.keys() & fv.entries.keys()
    return float(sum(np.sqrt(fu.entries[x] * fv.entries[x]) for x in common) / np.sqrt(nu * nv))


def _pair_vectors(g, u, v, k, kw):
    vecs = exact_frequency_vectors(g, k, **kw)
    return vecs[u], vecs[v]


def minratio_similarity(g: Graph, u: int, v: int, k: int, p: int = 1, **kw) -> float:
    """``sum_x min(f_u[x]^p / ||f_u||_p^p, f_v[x]^p / ||f_v||_p^p)``."""
    if p not in (1, 2):
        raise DomainError("p must be 1 or 2")
    return minratio_from_vectors(*_pair_vectors(g, u, v, k, kw), p)


def cosine_similarity(g: Graph, u: int, v: int, k: int, **kw) -> float:
    return cosine_from_vectors(*_pair_vectors(g, u, v, k, kw))


def sqrt_cosine(g: Graph, u: int, v: int, k: int, **kw) -> float:
    """Sqrt-cosine similarity ``sum_x sqrt(f_u[x] f_v[x]) / sqrt(||f_u||_1 ||f_v||_1)``.

    Written with the square root inside the sum so it equals the Bhattacharyya
    coefficient of the two L1-normalized vectors and lies in [0, 1].
    """
    return sqrt_cosine_from_vectors(*_pair_vectors(g, u, v, k, kw))


def similarity_matrix(g: Graph, k: int, measure: str, **kw) -> np.ndarray:
    """All-pairs exact similarity: ``jaccard``, ``minratio1``, ``minratio2``, ``cosine`` or ``sqrt_cosine``."""
    n = g.n
    out = np.eye(n)
    if measure == "jaccard":
        balls = [g.khop_set(u, k) for u in range(n)]
        for u in range(n):
            for v in range(u + 1, n):
                out[u, v] = out[v, u] = len(balls[u] & balls[v]) / len(balls[u] | balls[v])
        return out
    vecs = exact_frequency_vectors(g, k, **kw)
    fn = {
        "minratio1": lambda a, b: minratio_from_vectors(a, b, 1),
        "minratio2": lambda a, b: minratio_from_vectors(a, b, 2),
        "cosine": cosine_from_vectors,
        "sqrt_cosine": sqrt_cosine_from_vectors,
    }[measure]
    for u in range(n):
        out[u, u] = fn(vecs[u], vecs[u])
        for v in range(u + 1, n):
            out[u, v] = out[v, u] = fn(vecs[u], vecs[v])
    return out


def reference_lp_sample(g: Graph, ctx: SeedContext, cfg: SamplerConfig, r=None, vectors=None) -> SampleVector:
    """Materialize every reweighted vector ``f_u[x] / r_x^(1/p)`` and sample from it directly.

    argmax mode returns the heaviest entry (smaller id on ties); threshold mode
    returns the unique entry reaching the exact ``||f_u||_p``, else missing.
    """
    if cfg.p not in (1, 2):
        raise DomainError("reference sampler needs method l1 or l2")
    if vectors is None:
        vectors = exact_frequency_vectors(g, cfg.k, cfg.decay, cfg.use_node_weights,
                                          cfg.use_edge_weights, recurrence=cfg.recurrence)
    ru = _uniforms(g, ctx, r)
    root = ru if cfg.p == 1 else np.sqrt(ru)
    out = np.full(g.n, MISSING, dtype=np.int64)
    wts = np.zeros(g.n)
    for u, fv in enumerate(vectors):
        if not fv.entries:
            continue
        z = {x: c / root[x] for x, c in fv.entries.items()}
        if cfg.mode == "argmax":
            x, w = min(z.items(), key=lambda kv: (-kv[1], kv[0]))
            out[u], wts[u] = x, w
        else:
            t = fv.norm(cfg.p)
            hits = [(x, w) for x, w in z.items() if w >= t]
            if len(hits) == 1:
                out[u], wts[u] = hits[0]
    return SampleVector(out, wts)


def empirical_distribution(
    g: Graph, u: int, cfg: SamplerConfig, trials: int, seed: int = 42, reference: bool = False
) -> dict:
    """Normalized frequency of each sample of node ``u`` over repetitions ``0..trials-1``.

    Misses (threshold mode) are tallied under ``None``. ``reference=True`` uses
    :func:`reference_lp_sample` instead of the sketch sampler.
    """
    if trials < 1:
        raise DomainError("trials must be at least 1")
    g._check(u)
    if reference:
        vecs = exact_frequency_vectors(g, cfg.k, cfg.decay, cfg.use_node_weights,
                                       cfg.use_edge_weights, recurrence=cfg.recurrence)
        col = np.array([reference_lp_sample(g, SeedContext(seed, j), cfg, vectors=vecs).samples[u]
                        for j in range(trials)])
    else:
        col = sample_columns(g, cfg, seed, range(trials))[u]
    keys, counts = np.unique(col, return_counts=True)
    return {(None if x == MISSING else int(x)): c / trials for x, c in zip(keys, counts)}


def collision_matrix(samples: np.ndarray) -> np.ndarray:
    """Pairwise fraction of columns with equal, non-missing entries."""
    n, d = samples.shape
    out = np.zeros((n, n))
    for j in range(d):
        col = samples[:, j]
        eq = (col[:, None] == col[None, :]) & (col != MISSING)[:, None]
        out += eq
    return out / d


def empirical_collision_matrix(g: Graph, cfg: SamplerConfig, d: int, seed: int = 42) -> np.ndarray:
    if d < 1:
        raise DomainError("d must be at least 1")
    return collision_matrix(sample_columns(g, cfg, seed, range(d)))

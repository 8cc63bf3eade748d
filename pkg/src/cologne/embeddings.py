"""Embedding matrices: d coordinated samples per node, attribute substitution, TSV I/O."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParseError
from .graph import Graph, NodeAttributes, _lines
from .randomness import attribute_rank_table
from .samplers import MISSING, SamplerConfig, sample_columns

MISSING_TOKEN = "∅"
HEADER_TAG = "#cologne"


@dataclass(eq=False)
class EmbeddingMatrix:
    """``values[u, j]`` indexes ``tokens`` (node or attribute labels); ``MISSING`` is a miss.

    Column ``j`` was produced under repetition ``j`` of ``seed``.
    """

    labels: tuple[str, ...]
    values: np.ndarray
    tokens: tuple[str, ...]
    method: str = "l0"
    k: int = 0
    seed: int = 42
    decay: float = 1.0
    capacity: int = 10
    mode: str = "argmax"

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def row_strings(self, u: int) -> list[str]:
        return [MISSING_TOKEN if x == MISSING else self.tokens[x] for x in self.values[u].tolist()]

    def to_strings(self) -> list[list[str]]:
        return [self.row_strings(u) for u in range(self.n)]

    def header(self) -> str:
        return (f"{HEADER_TAG}\tmethod={self.method}\tk={self.k}\td={self.d}\tseed={self.seed}"
                f"\tlambda={self.decay!r}\tcapacity={self.capacity}\tmode={self.mode}")

    def row_index(self, u) -> int:
        if isinstance(u, str):
            try:
                return self.labels.index(u)
            except ValueError:
                raise DomainError(f"unknown row label {u!r}") from None
        return int(u)

    def __eq__(self, other):
        if not isinstance(other, EmbeddingMatrix):
            return NotImplemented
        return (self.header() == other.header() and self.labels == other.labels
                and self.to_strings() == other.to_strings())


def embed(g: Graph, cfg: SamplerConfig, d: int, global_seed: int = 42, threads: int = 1) -> EmbeddingMatrix:
    """Run the sampler ``d`` times (repetitions ``0..d-1``) and stack the columns."""
    if d < 1:
        raise DomainError("d must be at least 1")
    if threads > 1 and d > 1:
        chunks = np.array_split(np.arange(d), min(threads, d))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda reps: sample_columns(g, cfg, global_seed, reps.tolist()), chunks))
        values = np.hstack(parts)
    else:
        values = sample_columns(g, cfg, global_seed, range(d))
    return EmbeddingMatrix(
        labels=g.labels, values=values, tokens=g.labels, method=cfg.method, k=cfg.k,
        seed=global_seed, decay=cfg.decay, capacity=cfg.capacity, mode=cfg.mode,
    )


def best_attributes(attrs: NodeAttributes, global_seed: int, repetitions) -> np.ndarray:
    """Per node and repetition, the attribute id of minimum exponential-race rank (-1 if none)."""
    repetitions = list(repetitions)
    n = attrs.n
    out = np.full((n, len(repetitions)), -1, dtype=np.int64)
    keep = attrs.weights > 0
    if not keep.any():
        return out
    owner = np.repeat(np.arange(n), np.diff(attrs.indptr))[keep]
    ids = attrs.attr_ids[keep]
    ranks = attribute_rank_table(global_seed, repetitions, ids, attrs.weights[keep])
    starts = np.flatnonzero(np.r_[True, owner[1:] != owner[:-1]])
    rows = owner[starts]
    low = np.minimum.reduceat(ranks, starts, axis=0)
    seg = np.repeat(np.arange(len(starts)), np.diff(np.r_[starts, len(owner)]))
    cand = np.where(ranks == low[seg], ids[:, None], np.iinfo(np.int64).max)
    out[rows] = np.minimum.reduceat(cand, starts, axis=0)
    return out


def substitute_attributes(emb: EmbeddingMatrix, attrs: NodeAttributes, global_seed: int | None = None) -> EmbeddingMatrix:
    """Replace each sampled node by one of its attributes, sampled in a coordinated way.

    The attribute draw for column ``j`` is keyed by ``(global_seed, j)`` and the
    attribute alone, so equal samples in a column map to equal attributes.
    Nodes without attributes stand for themselves.
    """
    if attrs.n != len(emb.tokens):
        raise DomainError("attributes do not match the embedding's node vocabulary")
    seed = emb.seed if global_seed is None else global_seed
    best = best_attributes(attrs, seed, range(emb.d))
    index: dict[str, int] = {}
    attr_tok = np.array([index.setdefault(a, len(index)) for a in attrs.attr_labels], dtype=np.int64)
    node_tok = np.array([index.setdefault(lab, len(index)) for lab in emb.tokens], dtype=np.int64)
    values = np.full_like(emb.values, MISSING)
    for j in range(emb.d):
        col = emb.values[:, j]
        hit = col != MISSING
        a = best[col[hit], j]
        from_attr = attr_tok[np.maximum(a, 0)] if len(attr_tok) else a
        values[hit, j] = np.where(a >= 0, from_attr, node_tok[col[hit]])
    return EmbeddingMatrix(
        labels=emb.labels, values=values, tokens=tuple(index), method=emb.method, k=emb.k,
        seed=emb.seed, decay=emb.decay, capacity=emb.capacity, mode=emb.mode,
    )


def collision_similarity(emb: EmbeddingMatrix, u, v) -> float:
    """Fraction of coordinates where rows ``u`` and ``v`` agree; misses never agree."""
    a, b = emb.values[emb.row_index(u)], emb.values[emb.row_index(v)]
    return float(np.mean((a == b) & (a != MISSING)))


def write_tsv(emb: EmbeddingMatrix, sink) -> None:
    lines = [emb.header()]
    for u, lab in enumerate(emb.labels):
        lines.append("\t".join([lab, *emb.row_strings(u)]))
    text = "\n".join(lines) + "\n"
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sink.write(text)


_META = {"method": str, "k": int, "d": int, "seed": int, "lambda": float, "capacity": int, "mode": str}


def read_tsv(source) -> EmbeddingMatrix:
    it = iter(_lines(source))
    first = next(it, None)
    if first is None or not first.startswith(HEADER_TAG):
        raise ParseError("missing '#cologne' header", 1)
    meta = {}
    for field_ in first.rstrip("\r\n").split("\t")[1:]:
        key, sep, val = field_.partition("=")
        if not sep:
            raise ParseError(f"bad header field {field_!r}", 1)
        if key in _META:
            try:
                meta[key] = _META[key](val)
            except ValueError:
                raise ParseError(f"bad value for {key}: {val!r}", 1) from None
    if "d" not in meta:
        raise ParseError("header lacks d=", 1)
    d = meta["d"]
    labels, rows = [], []
    index: dict[str, int] = {}
    for lineno, raw in enumerate(it, start=2):
        line = raw.rstrip("\r\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != d + 1:
            raise ParseError(f"expected {d} samples, found {len(parts) - 1}", lineno)
        labels.append(parts[0])
        rows.append([MISSING if t == MISSING_TOKEN else index.setdefault(t, len(index)) for t in parts[1:]])
    values = np.array(rows, dtype=np.int64).reshape(len(rows), d)
    return EmbeddingMatrix(
        labels=tuple(labels), values=values, tokens=tuple(index),
        method=meta.get("method", "l0"), k=meta.get("k", 0), seed=meta.get("seed", 42),
        decay=meta.get("lambda", 1.0), capacity=meta.get("capacity", 10), mode=meta.get("mode", "argmax"),
    )

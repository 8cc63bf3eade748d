"""Immutable CSR graphs, edge-list / attribute parsing and neighborhood queries."""
from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, ParseError


def _lines(source) -> Iterator[str]:
    """Yield lines from a path, an open text stream or an iterable of strings."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            yield from fh
    else:
        yield from source


@dataclass(frozen=True, eq=False)
class Graph:
    """Compressed adjacency structure.

    Out-neighbors of ``u`` are ``indices[indptr[u]:indptr[u+1]]``, sorted by
    neighbor id (then weight). Parallel edges are distinct entries. In undirected graphs
    every non-loop edge is stored in both directions and a self-loop once.
    """

    indptr: np.ndarray
    indices: np.ndarray
    edge_weights: np.ndarray | None = None
    node_weights: np.ndarray | None = None
    directed: bool = False
    labels: tuple[str, ...] = ()
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.indptr) - 1
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))
        if len(self.labels) != n:
            raise DomainError(f"{len(self.labels)} labels for {n} nodes")
        index = {lab: i for i, lab in enumerate(self.labels)}
        if len(index) != n:
            raise DomainError("node labels must be unique")
        object.__setattr__(self, "_index", index)
        if self.edge_weights is not None:
            if len(self.edge_weights) != len(self.indices):
                raise DomainError("edge_weights must align with adjacency entries")
            if np.any(self.edge_weights < 0) or not np.all(np.isfinite(self.edge_weights)):
                raise DomainError("edge weights must be finite and nonnegative")
        if self.node_weights is not None:
            if len(self.node_weights) != n:
                raise DomainError("node_weights must have one entry per node")
            if np.any(self.node_weights < 0) or not np.all(np.isfinite(self.node_weights)):
                raise DomainError("node weights must be finite and nonnegative")
        for arr in (self.indptr, self.indices, self.edge_weights, self.node_weights):
            if arr is not None:
                arr.setflags(write=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        src: Sequence[int],
        dst: Sequence[int],
        weights: Sequence[float] | None = None,
        *,
        directed: bool = False,
        labels: Sequence[str] | None = None,
        node_weights: Sequence[float] | None = None,
    ) -> "Graph":
        src = np.asarray(src, dtype=np.int64).reshape(-1)
        dst = np.asarray(dst, dtype=np.int64).reshape(-1)
        if src.shape != dst.shape:
            raise DomainError("src and dst differ in length")
        if len(src) and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
            raise DomainError("edge endpoint out of range")
        w = None if weights is None else np.asarray(weights, dtype=np.float64).reshape(-1)
        if w is not None and len(w) == 0:
            w = None  # an edgeless weighted graph is indistinguishable from an unweighted one
        if w is not None and np.any(w < 0):
            raise DomainError("edge weights must be nonnegative")
        if not directed:
            back = src != dst
            src, dst = np.concatenate([src, dst[back]]), np.concatenate([dst, src[back]])
            if w is not None:
                w = np.concatenate([w, w[back]])
        # canonical layout: parallel edges ordered by weight, so it depends only on the edge multiset
        keys = (dst, src) if w is None else (w, dst, src)
        order = np.lexsort(keys)
        src, dst = src[order], dst[order]
        if w is not None:
            w = w[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        nw = None if node_weights is None else np.asarray(node_weights, dtype=np.float64)
        return cls(
            indptr=indptr,
            indices=dst.copy(),
            edge_weights=w,
            node_weights=nw,
            directed=directed,
            labels=tuple(labels) if labels is not None else (),
        )

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def num_entries(self) -> int:
        """Number of adjacency entries (directed arcs as stored)."""
        return len(self.indices)

    @property
    def m(self) -> int:
        """Number of edges; an undirected edge counts once."""
        if self.directed:
            return self.num_entries
        rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
        loops = int(np.count_nonzero(rows == self.indices))
        return (self.num_entries - loops) // 2 + loops

    @property
    def weighted(self) -> bool:
        return self.edge_weights is not None

    def id_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise DomainError(f"unknown node label {label!r}") from None

    def label_of(self, u: int) -> str:
        self._check(u)
        return self.labels[u]

    def degree(self, u: int) -> int:
        self._check(u)
        return int(self.indptr[u + 1] - self.indptr[u])

    def _check(self, u):
        if not (0 <= u < self.n):
            raise DomainError(f"node id {u} out of range [0, {self.n})")

    def neighbors(self, u: int) -> list[tuple[int, float]]:
        """Out-neighbors of ``u`` in adjacency order with edge weights (1.0 if unweighted)."""
        self._check(u)
        lo, hi = self.indptr[u], self.indptr[u + 1]
        nbrs = self.indices[lo:hi].tolist()
        if self.edge_weights is None:
            return [(v, 1.0) for v in nbrs]
        return list(zip(nbrs, self.edge_weights[lo:hi].tolist()))

    def khop_set(self, u: int, k: int) -> set[int]:
        """Nodes within out-distance ``k`` of ``u``, ``u`` included."""
        self._check(u)
        if k < 0:
            raise DomainError("k must be nonnegative")
        seen = {u}
        frontier = deque([(u, 0)])
        while frontier:
            x, d = frontier.popleft()
            if d == k:
                continue
            for v in self.indices[self.indptr[x]:self.indptr[x + 1]].tolist():
                if v not in seen:
                    seen.add(v)
                    frontier.append((v, d + 1))
        return seen

    def edge_weight_array(self, use_edge_weights: bool = True) -> np.ndarray:
        if use_edge_weights and self.edge_weights is not None:
            return np.asarray(self.edge_weights, dtype=np.float64)
        return np.ones(self.num_entries, dtype=np.float64)

    def node_weight_array(self, use_node_weights: bool = True) -> np.ndarray:
        if use_node_weights and self.node_weights is not None:
            return np.asarray(self.node_weights, dtype=np.float64)
        return np.ones(self.n, dtype=np.float64)

    def adjacency(self, use_edge_weights: bool = True) -> sp.csr_matrix:
        """Sparse (weighted) adjacency matrix; parallel edges are summed."""
        a = sp.csr_matrix(
            (self.edge_weight_array(use_edge_weights).copy(), self.indices.copy(), self.indptr.copy()),
            shape=(self.n, self.n),
        )
        a.sum_duplicates()
        return a

    def edges(self) -> Iterator[tuple[int, int, float]]:
        """Each stored edge once: all arcs if directed, ``u <= v`` arcs if undirected."""
        w = self.edge_weight_array()
        for u in range(self.n):
            for e in range(self.indptr[u], self.indptr[u + 1]):
                v = int(self.indices[e])
                if self.directed or u <= v:
                    yield u, v, float(w[e])

    def with_node_weights(self, node_weights) -> "Graph":
        return Graph(
            indptr=self.indptr, indices=self.indices, edge_weights=self.edge_weights,
            node_weights=np.asarray(node_weights, dtype=np.float64),
            directed=self.directed, labels=self.labels,
        )

    def same_structure(self, other: "Graph") -> bool:
        def eq(a, b):
            if a is None or b is None:
                return a is None and b is None
            return np.array_equal(a, b)
        return (
            self.directed == other.directed
            and self.labels == other.labels
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and eq(self.edge_weights, other.edge_weights)
            and eq(self.node_weights, other.node_weights)
        )


def load_edge_list(source, directed: bool = False, vocab: Iterable[str] | None = None) -> Graph:
    """Parse ``u v [w]`` lines; ``#`` lines and blank lines are skipped.

    Labels are interned in order of first appearance, after any labels
    given in ``vocab`` (which pins ids and keeps isolated nodes).
    """
    index: dict[str, int] = {}
    for lab in vocab or ():
        index.setdefault(lab, len(index))
    src, dst, wts = [], [], []
    weighted = None
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'u v [w]', got {line!r}", lineno)
        has_w = len(parts) == 3
        if weighted is None:
            weighted = has_w
        elif weighted != has_w:
            raise ParseError("mixed weighted and unweighted lines", lineno)
        if has_w:
            try:
                w = float(parts[2])
            except ValueError:
                raise ParseError(f"bad weight {parts[2]!r}", lineno) from None
            if not math.isfinite(w):
                raise ParseError(f"non-finite weight {parts[2]!r}", lineno)
            if w < 0:
                raise DomainError(f"line {lineno}: negative edge weight {w}")
            wts.append(w)
        for lab in parts[:2]:
            index.setdefault(lab, len(index))
        src.append(index[parts[0]])
        dst.append(index[parts[1]])
    return Graph.from_edges(
        len(index), src, dst, wts if weighted else None,
        directed=directed, labels=list(index),
    )


def write_edge_list(g: Graph, sink) -> None:
    """Inverse of :func:`load_edge_list` (reload with the vocabulary to pin ids)."""
    out = []
    for u, v, w in g.edges():
        if g.weighted:
            out.append(f"{g.labels[u]} {g.labels[v]} {w!r}\n")
        else:
            out.append(f"{g.labels[u]} {g.labels[v]}\n")
    _write(sink, "".join(out))


def write_vocab(g: Graph, sink) -> None:
    _write(sink, "".join(lab + "\n" for lab in g.labels))


def read_vocab(source) -> list[str]:
    return [line.rstrip("\n") for line in _lines(source) if line.rstrip("\n")]


def _write(sink, text):
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sink.write(text)


@dataclass(frozen=True)
class NodeAttributes:
    """Per-node weighted attribute lists in CSR form over attribute ids."""

    indptr: np.ndarray
    attr_ids: np.ndarray
    weights: np.ndarray
    attr_labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    def of(self, u: int) -> list[tuple[int, float]]:
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return list(zip(self.attr_ids[lo:hi].tolist(), self.weights[lo:hi].tolist()))

    def labelled(self, u: int) -> list[tuple[str, float]]:
        return [(self.attr_labels[a], w) for a, w in self.of(u)]


def load_attributes(source, g: Graph) -> NodeAttributes:
    """Parse ``node<TAB>attr[:weight],...`` lines against the node vocabulary of ``g``."""
    per_node: dict[int, list[tuple[int, float]]] = {}
    attr_index: dict[str, int] = {}
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        if "\t" not in line:
            raise ParseError("expected 'node<TAB>attributes'", lineno)
        node, rest = line.split("\t", 1)
        if node not in g._index:
            raise DomainError(f"line {lineno}: unknown node label {node!r}")
        u = g._index[node]
        items = per_node.setdefault(u, [])
        for tok in filter(None, (t.strip() for t in rest.split(","))):
            name, sep, wtxt = tok.rpartition(":")
            if not sep:
                name, w = tok, 1.0
            else:
                try:
                    w = float(wtxt)
                except ValueError:
                    raise ParseError(f"bad attribute weight in {tok!r}", lineno) from None
            if not name:
                raise ParseError(f"empty attribute name in {tok!r}", lineno)
            if not math.isfinite(w):
                raise ParseError(f"non-finite attribute weight in {tok!r}", lineno)
            if w < 0:
                raise DomainError(f"line {lineno}: negative attribute weight {w}")
            items.append((attr_index.setdefault(name, len(attr_index)), w))
    counts = np.array([len(per_node.get(u, ())) for u in range(g.n)], dtype=np.int64)
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    flat = [it for u in range(g.n) for it in per_node.get(u, ())]
    return NodeAttributes(
        indptr=indptr,
        attr_ids=np.array([a for a, _ in flat], dtype=np.int64),
        weights=np.array([w for _, w in flat], dtype=np.float64),
        attr_labels=tuple(attr_index),
    )


def erdos_renyi(n: int, p: float, seed: int = 0, directed: bool = False) -> Graph:
    """G(n, p) without self-loops; O(n^2) so meant for small test graphs."""
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < p
    if directed:
        np.fill_diagonal(mask, False)
    else:
        mask = np.triu(mask, k=1)
    src, dst = np.nonzero(mask)
    return Graph.from_edges(n, src, dst, directed=directed)


def random_graph(n: int, m: int, seed: int = 0, directed: bool = False) -> Graph:
    """G(n, m): ``m`` distinct edges drawn uniformly, no self-loops."""
    max_m = n * (n - 1) if directed else n * (n - 1) // 2
    if m > max_m:
        raise DomainError(f"cannot place {m} edges on {n} nodes")
    rng = np.random.default_rng(seed)
    keys = np.empty(0, dtype=np.int64)
    while len(keys) < m:
        need = int((m - len(keys)) * 1.1) + 16
        u = rng.integers(0, n, need)
        v = rng.integers(0, n, need)
        ok = u != v
        u, v = u[ok], v[ok]
        if not directed:
            u, v = np.minimum(u, v), np.maximum(u, v)
        keys = np.unique(np.concatenate([keys, u * n + v]))
    keys = rng.permutation(keys)[:m]
    return Graph.from_edges(n, keys // n, keys % n, directed=directed)

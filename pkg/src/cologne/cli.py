"""Command-line entry point: ``cologne {embed,similarity,oracle,bench}``."""
from __future__ import annotations

import argparse
import sys
import time

from . import oracle
from .embeddings import collision_similarity, embed, read_tsv, substitute_attributes, write_tsv
from .errors import CologneError, ParseError, ResourceError
from .graph import load_attributes, load_edge_list, random_graph, write_vocab
from .samplers import METHODS, MODES, SamplerConfig, sample_columns


def _positive(kind):
    def parse(text):
        val = kind(text)
        if val < 1:
            raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
        return val
    return parse


def _nonneg_int(text):
    val = int(text)
    if val < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return val


def _unit(text):
    val = float(text)
    if not 0.0 <= val <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text}")
    return val


def _open_unit(text):
    val = float(text)
    if not 0.0 < val < 1.0:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {text}")
    return val


def _sampler_flags(p: argparse.ArgumentParser, k_required: bool = True, default_method="l0"):
    p.add_argument("--k", type=_nonneg_int, required=k_required, help="hop depth")
    p.add_argument("--method", choices=METHODS, default=default_method)
    p.add_argument("--capacity", type=_positive(int), default=10, help="Frequent summary size")
    p.add_argument("--mode", choices=MODES, default="argmax")
    p.add_argument("--lambda", dest="decay", type=_unit, default=1.0, help="per-hop decay")
    p.add_argument("--epsilon", type=_open_unit, default=0.1, help="CountSketch accuracy (L2 threshold)")
    p.add_argument("--seed", type=int, default=42)


def _graph_flags(p: argparse.ArgumentParser, required=True):
    p.add_argument("--graph", required=required, help="edge list 'u v [w]'")
    p.add_argument("--directed", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cologne", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="write a coordinated-sample embedding TSV")
    _graph_flags(p)
    _sampler_flags(p)
    p.add_argument("--dim", type=_positive(int), default=25, help="samples per node (d)")
    p.add_argument("--attributes", help="node attribute file 'node<TAB>attr[:w],...'")
    p.add_argument("--output", help="embedding TSV (default: stdout)")
    p.add_argument("--vocab", help="also write the node vocabulary here")
    p.add_argument("--threads", type=_positive(int), default=1)

    p = sub.add_parser("similarity", help="collision rates for node pairs")
    _graph_flags(p, required=False)
    _sampler_flags(p, k_required=False)
    p.add_argument("--embedding", help="read an embedding TSV instead of sampling")
    p.add_argument("--dim", type=_positive(int), default=25)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--pairs", help="file of 'u v' label pairs")
    grp.add_argument("--all-pairs", action="store_true")
    p.add_argument("--exact", action="store_true", help="add the exact similarity the collision rate estimates")
    p.add_argument("--max-nodes", type=_positive(int), default=oracle.MAX_NODES)
    p.add_argument("--output")
    p.add_argument("--threads", type=_positive(int), default=1)

    p = sub.add_parser("oracle", help="exact reference tables")
    _graph_flags(p)
    _sampler_flags(p)
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--freq", action="store_true", help="exact k-hop walk-count vectors")
    what.add_argument("--similarity", choices=["jaccard", "minratio1", "minratio2", "cosine", "sqrt_cosine"])
    what.add_argument("--distribution", metavar="NODE", help="empirical sample distribution of NODE")
    p.add_argument("--format", choices=["rows", "tsv"], default="rows", help="layout of --freq output")
    p.add_argument("--trials", type=_positive(int), default=1000)
    p.add_argument("--max-nodes", type=_positive(int), default=oracle.MAX_NODES)
    p.add_argument("--output")

    p = sub.add_parser("bench", help="time feature generation per method")
    _graph_flags(p, required=False)
    p.add_argument("--random", nargs=2, type=int, metavar=("N", "M"), help="use a generated G(n, m) graph")
    p.add_argument("--k", type=_nonneg_int, required=True)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--dims", default="25,50", help="comma-separated d values")
    p.add_argument("--capacity", type=_positive(int), default=10)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", help="machine-readable TSV")
    return parser


def _config(args) -> SamplerConfig:
    return SamplerConfig(method=args.method, k=args.k, capacity=args.capacity, mode=args.mode,
                         decay=args.decay, epsilon=args.epsilon)


class _Out:
    """Write to ``--output`` if given, else stdout."""

    def __init__(self, path):
        self.path = path

    def __enter__(self):
        self.fh = open(self.path, "w", encoding="utf-8") if self.path else sys.stdout
        return self.fh

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()


def cmd_embed(args) -> int:
    g = load_edge_list(args.graph, directed=args.directed)
    emb = embed(g, _config(args), args.dim, args.seed, threads=args.threads)
    if args.attributes:
        emb = substitute_attributes(emb, load_attributes(args.attributes, g))
    with _Out(args.output) as fh:
        write_tsv(emb, fh)
    if args.vocab:
        write_vocab(g, args.vocab)
    return 0


def _read_pairs(path, labels):
    known = set(labels)
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"expected 'u v', got {line!r}", lineno)
            for lab in parts:
                if lab not in known:
                    raise ParseError(f"unknown node {lab!r}", lineno)
            pairs.append((parts[0], parts[1]))
    return pairs


def _fmt(x: float) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() else f"{x:.6g}"


def cmd_similarity(args) -> int:
    g = None
    if args.graph:
        g = load_edge_list(args.graph, directed=args.directed)
    if args.embedding:
        emb = read_tsv(args.embedding)
        method, k = emb.method, emb.k
    else:
        if g is None or args.k is None:
            raise CologneError("similarity needs --embedding, or --graph with --k")
        emb = embed(g, _config(args), args.dim, args.seed, threads=args.threads)
        method, k = args.method, args.k
    labels = list(emb.labels)
    if args.all_pairs:
        pairs = [(labels[i], labels[j]) for i in range(len(labels)) for j in range(i + 1, len(labels))]
    else:
        pairs = _read_pairs(args.pairs, labels)
    exact = None
    if args.exact:
        if g is None:
            raise CologneError("--exact needs --graph")
        if g.n > args.max_nodes:
            raise ResourceError(f"graph has {g.n} nodes, above the oracle limit {args.max_nodes}; "
                                "drop --exact or raise --max-nodes")
        measure = {"l0": "jaccard", "l1": "minratio1", "l2": "minratio2"}.get(method)
        try:
            exact = oracle.similarity_matrix(g, k, measure, decay=emb.decay) if measure else None
        except ResourceError as err:
            raise ResourceError(f"{err}; drop --exact to skip the exact column") from None
    with _Out(args.output) as fh:
        fh.write("u\tv\tcollision" + ("\texact" if args.exact else "") + "\n")
        for a, b in pairs:
            row = f"{a}\t{b}\t{collision_similarity(emb, a, b):.6g}"
            if args.exact:
                row += "\t" + ("NA" if exact is None else f"{exact[g.id_of(a), g.id_of(b)]:.4f}")
            fh.write(row + "\n")
    return 0


def cmd_oracle(args) -> int:
    g = load_edge_list(args.graph, directed=args.directed)
    if g.n > args.max_nodes:
        raise ResourceError(f"graph has {g.n} nodes, above the oracle limit {args.max_nodes}")
    lab = g.labels
    with _Out(args.output) as fh:
        if args.freq:
            vecs = oracle.exact_frequency_vectors(g, args.k, args.decay, max_nodes=args.max_nodes)
            for fv in vecs:
                items = sorted(fv.entries.items())
                if args.format == "rows":
                    fh.write(f"{lab[fv.owner]}: " + ",".join(f"{lab[x]}={_fmt(c)}" for x, c in items) + "\n")
                else:
                    for x, c in items:
                        fh.write(f"{lab[fv.owner]}\t{lab[x]}\t{_fmt(c)}\n")
        elif args.similarity:
            sim = oracle.similarity_matrix(g, args.k, args.similarity, decay=args.decay)
            fh.write(f"u\tv\t{args.similarity}\n")
            for i in range(g.n):
                for j in range(i + 1, g.n):
                    fh.write(f"{lab[i]}\t{lab[j]}\t{sim[i, j]:.6g}\n")
        else:
            u = g.id_of(args.distribution)
            dist = oracle.empirical_distribution(g, u, _config(args), args.trials, seed=args.seed)
            fh.write("node\tfrequency\n")
            for x in sorted(dist, key=lambda x: (x is None, x)):
                fh.write(f"{'∅' if x is None else lab[x]}\t{dist[x]:.6g}\n")
    return 0


def time_sampling(g, cfg: SamplerConfig, d: int, seed: int = 42) -> float:
    """Wall-clock seconds to produce ``d`` sample columns for every node."""
    t0 = time.perf_counter()
    sample_columns(g, cfg, seed, range(d))
    return time.perf_counter() - t0


def cmd_bench(args) -> int:
    if args.random:
        n, m = args.random
        g = random_graph(n, m, seed=args.seed)
    elif args.graph:
        g = load_edge_list(args.graph, directed=args.directed)
    else:
        raise CologneError("bench needs --graph or --random N M")
    methods = [x.strip() for x in args.methods.split(",") if x.strip()]
    dims = [int(x) for x in args.dims.split(",") if x.strip()]
    # compile the summary kernel outside the timed region
    sample_columns(g.__class__.from_edges(2, [0], [1]), SamplerConfig("l1", k=1), 0, [0])
    rows = []
    for method in methods:
        cfg = SamplerConfig(method=method, k=args.k, capacity=args.capacity)
        for d in dims:
            secs = time_sampling(g, cfg, d, args.seed)
            eps = g.num_entries * args.k * d / secs if secs > 0 else float("inf")
            rows.append((method, g.n, g.m, args.k, d, secs, eps))
    report = sys.stderr if args.output else sys.stdout
    for method, n, m, k, d, secs, eps in rows:
        print(f"{method:>3}  n={n} m={m} k={k} d={d}: {secs:.3f}s ({eps:.3g} edges/s)", file=report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write("method\tn\tm\tk\td\tseconds\tedges_per_second\n")
            for method, n, m, k, d, secs, eps in rows:
                fh.write(f"{method}\t{n}\t{m}\t{k}\t{d}\t{secs:.6f}\t{eps:.6g}\n")
    return 0


COMMANDS = {"embed": cmd_embed, "similarity": cmd_similarity, "oracle": cmd_oracle, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (CologneError, OSError) as err:
        print(f"cologne {args.command}: error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

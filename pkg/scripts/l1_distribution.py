"""Empirical sample distribution of one node next to its exact target.

Shows the sketch sampler, the brute-force reference sampler and the
normalized walk-count vector ``f_u / ||f_u||_1`` side by side.

    python3 scripts/l1_distribution.py --node 1 --k 2
"""
import argparse

from cologne.graph import load_edge_list
from cologne.oracle import empirical_distribution, exact_frequency_vectors
from cologne.samplers import SamplerConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graph", help="edge list; defaults to the path 0-1-2")
    ap.add_argument("--node", default="1")
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--method", default="l1", choices=["l1", "l2"])
    ap.add_argument("--mode", default="argmax", choices=["argmax", "threshold"])
    ap.add_argument("--trials", type=int, default=50_000)
    args = ap.parse_args()

    g = load_edge_list(args.graph) if args.graph else load_edge_list(["0 1", "1 2"])
    u = g.id_of(args.node)
    cfg = SamplerConfig(args.method, k=args.k, mode=args.mode)
    sketch = empirical_distribution(g, u, cfg, args.trials)
    ref = empirical_distribution(g, u, cfg, args.trials, reference=True)
    f = exact_frequency_vectors(g, args.k)[u]
    total = f.norm(1)
    print("node\tsketch\treference\tf/|f|_1")
    for x in sorted(set(sketch) | set(ref) | set(f.entries), key=lambda x: (x is None, x)):
        label = "∅" if x is None else g.label_of(x)
        share = f.entries.get(x, 0.0) / total if x is not None else 0.0
        print(f"{label}\t{sketch.get(x, 0):.4f}\t{ref.get(x, 0):.4f}\t{share:.4f}")


if __name__ == "__main__":
    main()

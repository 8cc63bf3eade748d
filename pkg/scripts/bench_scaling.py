"""Wall-clock scaling of each sampler in the number of edges and the dimension.

    python3 scripts/bench_scaling.py --n 10000 --edges 100000,200000 --dims 25,50 --k 4
"""
import argparse

from cologne.cli import time_sampling
from cologne.graph import random_graph
from cologne.samplers import SamplerConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--edges", default="100000,200000")
    ap.add_argument("--dims", default="25,50")
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--methods", default="l0,l1,l2,rw")
    ap.add_argument("--repeats", type=int, default=3, help="report the best of this many runs")
    args = ap.parse_args()

    warm = random_graph(50, 100, seed=0)
    for method in args.methods.split(","):
        time_sampling(warm, SamplerConfig(method, k=args.k), 2)

    print("method\tn\tm\tk\td\tseconds")
    for m in map(int, args.edges.split(",")):
        g = random_graph(args.n, m, seed=1)
        for method in args.methods.split(","):
            cfg = SamplerConfig(method, k=args.k)
            for d in map(int, args.dims.split(",")):
                best = min(time_sampling(g, cfg, d) for _ in range(args.repeats))
                print(f"{method}\t{g.n}\t{g.m}\t{args.k}\t{d}\t{best:.4f}", flush=True)


if __name__ == "__main__":
    main()

"""Per-iteration cost of the compiled and numpy kernels on ER graphs.

    python benchmarks/bench_kernels.py --sizes 10000 100000 --iters 30
"""
import argparse
import time

import numpy as np

from bhrank.blackhole import transform
from bhrank.generators import ErdosRenyiSpec, generate_er
from bhrank.kernels import available_backends
from bhrank.ranking import normalize_weights


def per_iteration(fn, iters, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best / iters


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10_000, 100_000])
    ap.add_argument("--mean-out", type=float, default=10.0)
    ap.add_argument("--iters", type=int, default=30)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)

    backends = available_backends()
    print(f"{'n':>8} {'arcs':>9} {'backend':>8} {'pagerank ms/it':>15} {'blackhole ms/it':>16} {'ns/arc':>7}")
    for n in args.sizes:
        g = generate_er(ErdosRenyiSpec(n, mean_outdegree=args.mean_out, seed=0))
        a = normalize_weights(g, zero_strength="sink")
        sink = (a.row_sums() == 0).astype(np.float64)
        tn = transform(g)
        bh = tn.abar
        v = np.full(n, 1.0 / n)
        results = {}
        for name, mod in backends.items():
            t_pr = per_iteration(
                lambda: mod.pagerank_power(a.values, a.row_idx, a.col_ptr, sink, v, 0.85, 0.0, args.iters),
                args.iters, args.repeats)
            t_bh = per_iteration(
                lambda: mod.blackhole_power(bh.values, bh.row_idx, bh.col_ptr, tn.s, tn.b, v, 0.85, 0.0, args.iters),
                args.iters, args.repeats)
            results[name] = (t_pr, t_bh)
            print(f"{n:>8} {g.n_arcs:>9} {name:>8} {1e3 * t_pr:>15.3f} {1e3 * t_bh:>16.3f} {1e9 * t_bh / g.n_arcs:>7.2f}")
        if len(results) == 2:
            speed = results["python"][1] / results["cython"][1]
            print(f"{'':>8} {'':>9} {'speedup':>8} {'':>15} {speed:>15.1f}x")


if __name__ == "__main__":
    main()

"""Command-line interface.

    bhrank rank --metric both --bounds 0:10 toy.edges
    bhrank generate er --n 1000 --mean-out 10 --weights 0:49 --seed 42 -o er.edges
    bhrank experiment synthetic --family sf --n 1000 --seed 7
    bhrank experiment advogato --data out.advogato --names ent.advogato.user.name
    bhrank wariness --bounds 0:10 toy.edges

Exit codes: 0 success, 1 input or validation error, 2 non-convergence
(results are still written). ``BHRANK_OUTPUT_DIR`` sets the default output
directory.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings
from pathlib import Path

from bhrank import __version__
from bhrank.blackhole import blackhole_metric, transform, wariness
from bhrank.errors import BHRankError, NotConvergedWarning
from bhrank.experiments import advogato_experiment, rank_positions, run_scaling_experiment, synthetic_experiment
from bhrank.generators import ErdosRenyiSpec, ScaleFreeSpec, generate_er, generate_scale_free
from bhrank.graph import WeightBounds
from bhrank.io import EdgeListFormat, load_edge_list, parse_range, read_metadata, write_edge_list, write_rank_csv
from bhrank.ranking import PageRankConfig, pagerank

EXIT_OK, EXIT_INPUT, EXIT_NOT_CONVERGED = 0, 1, 2

log = logging.getLogger("bhrank")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for non-convergence here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _default_outdir() -> Path:
    return Path(os.environ.get("BHRANK_OUTPUT_DIR", "."))


def _range(text):
    try:
        return parse_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_iteration_flags(p):
    p.add_argument("--d", type=float, default=0.85, help="damping factor (default 0.85)")
    p.add_argument("--tol", type=float, default=1e-10, help="L1 convergence tolerance (default 1e-10)")
    p.add_argument("--max-iters", type=int, default=1000)


def _add_graph_flags(p):
    p.add_argument("graph", help="edge list: 'src dst weight' per line")
    p.add_argument("--bounds", type=_range, metavar="L:H", help="global weight scale")
    p.add_argument("--bounds-file", metavar="FILE", help="sidecar with per-node bounds")
    p.add_argument("--node-ids", choices=("int", "token"), default="token")
    p.add_argument("--drop-self-loops", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bhrank", description="Weighted PageRank and the Black Hole Metric")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="rank the nodes of a graph")
    _add_graph_flags(p)
    _add_iteration_flags(p)
    p.add_argument("--metric", choices=("pagerank", "blackhole", "both"), default="both")
    p.add_argument("--zero-strength", choices=("raise", "sink"), default="raise",
                   help="PageRank handling of nodes whose weights sum to 0")
    p.add_argument("--output-dir", type=Path)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("wariness", help="print the network wariness")
    _add_graph_flags(p)
    _add_iteration_flags(p)
    p.set_defaults(func=cmd_wariness)

    p = sub.add_parser("generate", help="generate a synthetic weighted digraph")
    p.add_argument("family", choices=("er", "sf"))
    p.add_argument("--config", metavar="FILE", help="flat key = value file; flags override it")
    p.add_argument("--n", type=int)
    p.add_argument("--mean-out", type=float)
    p.add_argument("--weights", type=_range, metavar="L:H")
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--delta-in", type=float)
    p.add_argument("--delta-out", type=float)
    p.add_argument("-o", "--output", type=Path)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("experiment", help="rank-difference experiments")
    esub = p.add_subparsers(dest="kind", required=True)
    e = esub.add_parser("synthetic", help="PR vs BH before/after stretching the weights")
    e.add_argument("--family", choices=("er", "sf"), default="er")
    e.add_argument("--n", type=int, default=1000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--weights", type=_range, default=(0, 49), metavar="L:H")
    e.add_argument("--full", type=_range, default=(0, 99), metavar="L:H")
    e.add_argument("--graph", help="use this edge list instead of generating one")
    e.add_argument("--factor", type=float, help="weight factor (with --graph)")
    _add_iteration_flags(e)
    e.add_argument("--output-dir", type=Path)
    e.set_defaults(func=cmd_experiment)
    e = esub.add_parser("advogato", help="PR vs BH on the Advogato trust network")
    e.add_argument("--data", required=True)
    e.add_argument("--names", help="KONECT user-name file (one name per line)")
    e.add_argument("--top-k", type=int, default=10)
    e.add_argument("--bounds", type=_range, default=(0.6, 1.0), metavar="L:H")
    _add_iteration_flags(e)
    e.add_argument("--output-dir", type=Path)
    e.set_defaults(func=cmd_experiment)
    return parser


def _config(args) -> PageRankConfig:
    try:
        return PageRankConfig(d=args.d, tol=args.tol, max_iters=args.max_iters)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(args, need_bounds: bool):
    if args.bounds and args.bounds_file:
        raise UsageError("--bounds and --bounds-file are mutually exclusive")
    bounds = WeightBounds.uniform(*args.bounds) if args.bounds else None
    meta = "auto"
    if args.bounds_file:
        meta = args.bounds_file
    fmt = EdgeListFormat(node_ids=args.node_ids, self_loops="drop" if args.drop_self_loops else "error")
    g = load_edge_list(args.graph, fmt, bounds=bounds, meta=meta)
    if need_bounds and g.bounds is None:
        raise UsageError("the Black Hole Metric needs weight bounds: pass --bounds L:H or --bounds-file")
    return g


def cmd_rank(args) -> int:
    cfg = _config(args)
    want_bh = args.metric in ("blackhole", "both")
    g = _load(args, need_bounds=want_bh)
    outdir = args.output_dir or _default_outdir()
    outdir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.graph).name
    labels = g.node_labels()
    status = EXIT_OK
    if args.metric in ("pagerank", "both"):
        r = pagerank(g, cfg, zero_strength=args.zero_strength)
        header = {"metric": "pagerank", "d": cfg.d, "tol": cfg.tol, "iterations": r.iterations,
                  "converged": r.converged}
        path = write_rank_csv(outdir / f"{stem}.pagerank.csv", labels, r.p, rank_positions(r.p).positions, header)
        print(f"pagerank: {r.iterations} iterations, residual {r.residual:.3g} -> {path}")
        if not r.converged:
            status = EXIT_NOT_CONVERGED
    if want_bh:
        tn = transform(g)
        r = blackhole_metric(g, cfg, tn=tn)
        w = wariness(tn, r)
        header = {"metric": "blackhole", "d": cfg.d, "tol": cfg.tol, "iterations": r.iterations,
                  "converged": r.converged, "p_b": f"{r.p_b:.12g}", "wariness": f"{w:.12g}"}
        path = write_rank_csv(outdir / f"{stem}.blackhole.csv", labels, r.pbar,
                              rank_positions(r.pbar).positions, header)
        print(f"blackhole: {r.iterations} iterations, residual {r.residual:.3g} -> {path}")
        print(f"p_b = {r.p_b:.6f}")
        print(f"wariness = {w:.6f}")
        if not r.converged:
            status = EXIT_NOT_CONVERGED
    return status


def cmd_wariness(args) -> int:
    cfg = _config(args)
    g = _load(args, need_bounds=True)
    tn = transform(g)
    r = blackhole_metric(g, cfg, tn=tn)
    print(f"{wariness(tn, r):.12g}")
    return EXIT_OK if r.converged else EXIT_NOT_CONVERGED


_GEN_KEYS = {
    "n": int, "mean_out": float, "weights": parse_range, "seed": int, "alpha": float,
    "beta": float, "gamma": float, "delta_in": float, "delta_out": float,
}


def _generator_options(args) -> dict:
    opts: dict = {}
    if args.config:
        raw = read_metadata(args.config)["raw"]
        for key, value in raw.items():
            key = key.replace("-", "_")
            if key not in _GEN_KEYS:
                raise UsageError(f"{args.config}: unknown key {key!r}")
            opts[key] = _GEN_KEYS[key](value)
    for key in _GEN_KEYS:
        value = getattr(args, key)
        if value is not None:
            opts[key] = value
    return opts


def cmd_generate(args) -> int:
    o = _generator_options(args)
    if "n" not in o:
        raise UsageError("--n is required (flag or config file)")
    low, high = o.get("weights", (0, 49))
    if low != int(low) or high != int(high):
        raise UsageError("generated weights are integers: --weights needs integer bounds")
    common = {"weight_low": int(low), "weight_high": int(high), "seed": o.get("seed", 0)}
    if args.family == "er":
        extra = set(o) & {"alpha", "beta", "gamma", "delta_in", "delta_out"}
        if extra:
            raise UsageError(f"options {sorted(extra)} only apply to 'sf'")
        g = generate_er(ErdosRenyiSpec(n=o["n"], mean_outdegree=o.get("mean_out", 10.0), **common))
    else:
        if "mean_out" in o:
            raise UsageError("--mean-out only applies to 'er'")
        alpha = o.get("alpha", 0.41)
        gamma = o.get("gamma", 0.05)
        beta = o.get("beta", 1.0 - alpha - gamma if ("alpha" in o or "gamma" in o) else 0.54)
        spec = ScaleFreeSpec(n=o["n"], alpha=alpha, beta=beta, gamma=gamma,
                             delta_in=o.get("delta_in", 0.2), delta_out=o.get("delta_out", 0.0), **common)
        g = generate_scale_free(spec)
    out = args.output or _default_outdir() / f"{args.family}-{o['n']}-seed{common['seed']}.edges"
    out.parent.mkdir(parents=True, exist_ok=True)
    write_edge_list(g, out)
    print(f"{g.n} nodes, {g.n_arcs} arcs -> {out}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = _config(args)
    if args.kind == "advogato":
        report = advogato_experiment(
            args.data, cfg, top_k=args.top_k, bounds=WeightBounds.uniform(*args.bounds), names_path=args.names
        )
    elif args.graph:
        if args.factor is None:
            raise UsageError("--graph needs --factor")
        g = load_edge_list(args.graph, EdgeListFormat(node_ids="token"))
        report = run_scaling_experiment(
            g, args.factor, WeightBounds.uniform(*args.full), cfg,
            params={"graph": args.graph}, name=Path(args.graph).stem,
        )
    else:
        low, high = args.weights
        report = synthetic_experiment(args.family, args.n, args.seed, (int(low), int(high)), args.full, cfg)
    outdir = (args.output_dir or _default_outdir()) / report.name
    report.write(outdir)
    for c in report.comparisons:
        print(f"{c.label}: mean |diff| {c.abs_diffs.mean():.2f}, moved {100 * (c.abs_diffs > 0).mean():.1f}%")
    if report.top:
        print(f"{'rank':>4}  {'pagerank':<16}{'value':>12}  {'blackhole':<16}{'value':>12}")
        for row in report.top:
            print(f"{row['rank']:>4}  {row['pagerank_node']:<16}{row['pagerank_value']:>12.8f}  "
                  f"{row['blackhole_node']:<16}{row['blackhole_value']:>12.8f}")
    print(f"report -> {outdir}")
    converged = all(r.converged for r in report.runs.values())
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NotConvergedWarning)
            return args.func(args)
    except UsageError as exc:
        print(f"bhrank: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BHRankError, ValueError, OSError) as exc:
        print(f"bhrank: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

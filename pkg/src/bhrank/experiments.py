"""Rank-difference experiments: PageRank versus the Black Hole Metric on a base
network and on the same network with rescaled weights, plus the Advogato
trust network.

Scores become 1-based rank positions (descending score, ties broken by node
index); pairs of rankings are compared through the empirical CDF of the
absolute position difference.
"""
from __future__ import annotations

import csv
import json
import logging
import re
import time
from dataclasses import asdict, dataclass, field, is_dataclass
from pathlib import Path

import numpy as np

from bhrank.blackhole import blackhole_metric, transform, wariness
from bhrank.errors import LengthMismatch
from bhrank.generators import ErdosRenyiSpec, ScaleFreeSpec, generate_er, generate_scale_free, scale_weights
from bhrank.graph import WeightBounds, WeightedDigraph, build_graph
from bhrank.io import EdgeListFormat, parse_edge_list
from bhrank.ranking import PageRankConfig, pagerank

log = logging.getLogger(__name__)

TIE_POLICY = "score descending, then node index ascending"
ADVOGATO_LEVELS = (0.6, 0.8, 1.0)


@dataclass(frozen=True, eq=False)
class RankPositions:
    positions: np.ndarray
    tie_policy: str = TIE_POLICY

    def __len__(self):
        return len(self.positions)


def rank_positions(scores) -> RankPositions:
    """1-based positions; the highest score gets position 1."""
    scores = np.asarray(scores, dtype=np.float64)
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    n = len(scores)
    order = np.lexsort((np.arange(n), -scores))
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(1, n + 1)
    return RankPositions(pos)


@dataclass(frozen=True, eq=False)
class RankComparison:
    label: str
    abs_diffs: np.ndarray
    cdf: np.ndarray  # rows of (diff, cumulative frequency)

    @property
    def n(self) -> int:
        return len(self.abs_diffs)

    def cdf_at(self, x: float) -> float:
        """Fraction of nodes whose position moved by at most ``x``."""
        return float(np.count_nonzero(self.abs_diffs <= x)) / self.n

    def trimmed(self, fraction: float = 0.2) -> np.ndarray:
        """CDF rows with ``diff <= fraction * N`` (for plotting only)."""
        return self.cdf[self.cdf[:, 0] <= fraction * self.n]


def compare_ranks(a: RankPositions, b: RankPositions, label: str) -> RankComparison:
    pa, pb = np.asarray(a.positions), np.asarray(b.positions)
    if len(pa) != len(pb):
        raise LengthMismatch(f"cannot compare rankings of {len(pa)} and {len(pb)} nodes")
    diffs = np.abs(pa - pb)
    values, counts = np.unique(diffs, return_counts=True)
    cum = np.cumsum(counts) / len(diffs)
    return RankComparison(label, diffs, np.column_stack([values.astype(np.float64), cum]))


def percentile_points(comparisons, quantiles=(25, 50, 75)) -> list[float]:
    """x-points at which to compare CDFs: percentiles of the pooled non-zero diffs.

    Zero diffs are left out because in scale-free graphs most nodes have no
    in-arcs, tie exactly under every metric and never move; including them
    pins every percentile at 0. Falls back to all diffs when nothing moved.
    """
    pooled = np.concatenate([c.abs_diffs for c in comparisons])
    if np.any(pooled > 0):
        pooled = pooled[pooled > 0]
    return [float(x) for x in np.percentile(pooled, quantiles, method="inverted_cdf")]


def cdf_dominance(upper: RankComparison, lower: RankComparison, quantiles=(25, 50, 75)) -> list[dict]:
    """Evaluate both CDFs at shared percentile x-points."""
    rows = []
    for q, x in zip(quantiles, percentile_points([upper, lower], quantiles)):
        fu, fl = upper.cdf_at(x), lower.cdf_at(x)
        rows.append({"quantile": q, "x": x, upper.label: fu, lower.label: fl, "holds": fu >= fl})
    return rows


@dataclass(eq=False)
class MetricRun:
    name: str
    metric: str
    scores: np.ndarray
    positions: RankPositions
    iterations: int
    converged: bool
    residual: float
    runtime_s: float
    p_b: float | None = None
    wariness: float | None = None

    def summary(self) -> dict:
        out = {
            "metric": self.metric,
            "iterations": self.iterations,
            "converged": self.converged,
            "residual": self.residual,
            "runtime_s": round(self.runtime_s, 6),
        }
        if self.p_b is not None:
            out["p_b"] = self.p_b
            out["wariness"] = self.wariness
        return out


@dataclass(eq=False)
class ExperimentReport:
    name: str
    labels: list[str]
    runs: dict[str, MetricRun]
    comparisons: list[RankComparison]
    params: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    top: list[dict] | None = None

    @property
    def n(self) -> int:
        return len(self.labels)

    def comparison(self, label: str) -> RankComparison:
        for c in self.comparisons:
            if c.label == label:
                return c
        raise KeyError(label)

    def position_of(self, run: str, label: str) -> int:
        return int(self.runs[run].positions.positions[self.labels.index(label)])

    def manifest(self) -> dict:
        comps = {}
        for c in self.comparisons:
            comps[c.label] = {
                "file": _cdf_filename(c.label),
                "mean_abs_diff": float(c.abs_diffs.mean()),
                "max_abs_diff": int(c.abs_diffs.max()),
                "fraction_moved": float(np.count_nonzero(c.abs_diffs) / c.n),
            }
        out = {
            "experiment": self.name,
            "n": self.n,
            "params": _jsonable(self.params),
            "runs": {k: r.summary() for k, r in self.runs.items()},
            "comparisons": comps,
            "checks": _jsonable(self.checks),
        }
        if self.top is not None:
            out["top"] = self.top
        return out

    def write(self, directory, trim: float = 0.2) -> Path:
        """Write one ``diff,cum_freq`` CSV per comparison, positions, and a manifest."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for c in self.comparisons:
            with open(directory / _cdf_filename(c.label), "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["diff", "cum_freq"])
                for x, y in c.trimmed(trim):
                    w.writerow([int(x), repr(float(y))])
        with open(directory / "positions.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            names = list(self.runs)
            w.writerow(["node_label"] + [f"{k}_{col}" for k in names for col in ("score", "position")])
            for i, lab in enumerate(self.labels):
                row = [lab]
                for k in names:
                    r = self.runs[k]
                    row += [repr(float(r.scores[i])), int(r.positions.positions[i])]
                w.writerow(row)
        if self.top is not None:
            with open(directory / "top.csv", "w", newline="") as fh:
                w = csv.DictWriter(fh, fieldnames=list(self.top[0]))
                w.writeheader()
                w.writerows(self.top)
        (directory / "manifest.json").write_text(json.dumps(self.manifest(), indent=2) + "\n")
        return directory


def _cdf_filename(label: str) -> str:
    slug = re.sub(r"[^A-Za-z0-9]+", "_", label).strip("_").lower()
    return f"cdf_{slug}.csv"


def _jsonable(obj):
    if isinstance(obj, WeightBounds):
        return repr(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if is_dataclass(obj):
        return _jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _run_pagerank(name, g, cfg, zero_strength):
    t0 = time.perf_counter()
    r = pagerank(g, cfg, zero_strength=zero_strength)
    dt = time.perf_counter() - t0
    return MetricRun(name, "pagerank", r.p, rank_positions(r.p), r.iterations, r.converged, r.residual, dt)


def _run_blackhole(name, g, cfg):
    t0 = time.perf_counter()
    tn = transform(g)
    r = blackhole_metric(g, cfg, tn=tn)
    dt = time.perf_counter() - t0
    return MetricRun(
        name, "blackhole", r.pbar, rank_positions(r.pbar), r.iterations, r.converged,
        r.residual, dt, p_b=r.p_b, wariness=wariness(tn, r),
    )


def run_scaling_experiment(
    g: WeightedDigraph,
    factor: float,
    full_bounds: WeightBounds,
    cfg: PageRankConfig = PageRankConfig(),
    zero_strength: str = "sink",
    params: dict | None = None,
    name: str = "scaling",
) -> ExperimentReport:
    """PR and BH on ``g`` under ``full_bounds``, then on ``g`` scaled by ``factor``.

    PageRank must be unchanged by the scaling (L-inf below ``10 * tol``);
    this is checked and an AssertionError raised otherwise. Nodes whose
    weights all equal zero are treated as PageRank sinks unless
    ``zero_strength="raise"``.
    """
    g1 = g.with_bounds(full_bounds)
    g2 = scale_weights(g1, factor, full_bounds)
    pr1 = _run_pagerank("PR", g1, cfg, zero_strength)
    pr2 = _run_pagerank("PR2", g2, cfg, zero_strength)
    bh1 = _run_blackhole("BH1", g1, cfg)
    bh2 = _run_blackhole("BH2", g2, cfg)

    pr_shift = float(np.max(np.abs(pr1.scores - pr2.scores))) if g.n else 0.0
    if not pr_shift < 10 * cfg.tol:
        raise AssertionError(f"PageRank changed under weight scaling (L-inf {pr_shift:.3g})")

    comparisons = [
        compare_ranks(pr1.positions, bh1.positions, "PR - BH1"),
        compare_ranks(pr1.positions, bh2.positions, "PR - BH2"),
        compare_ranks(bh1.positions, bh2.positions, "BH1 - BH2"),
    ]
    checks = {
        "pr_scale_linf": pr_shift,
        "pr_positions_identical": bool(np.array_equal(pr1.positions.positions, pr2.positions.positions)),
        "dominance_PR-BH2_over_PR-BH1": cdf_dominance(comparisons[1], comparisons[0]),
    }
    all_params = {
        "factor": factor,
        "full_bounds": full_bounds,
        "d": cfg.d,
        "tol": cfg.tol,
        "max_iters": cfg.max_iters,
        "zero_strength": zero_strength,
        "n_arcs": g.n_arcs,
    }
    all_params.update(params or {})
    runs = {"PR": pr1, "PR2": pr2, "BH1": bh1, "BH2": bh2}
    return ExperimentReport(name, g.node_labels(), runs, comparisons, all_params, checks)


def synthetic_experiment(
    family: str,
    n: int,
    seed: int,
    weights: tuple[int, int] = (0, 49),
    full: tuple[float, float] = (0, 99),
    cfg: PageRankConfig = PageRankConfig(),
    **spec_kw,
) -> ExperimentReport:
    """Generate an ER (``"er"``) or scale-free (``"sf"``) graph and run the scaling study.

    Weights drawn from ``weights`` are scaled by ``full[1] / weights[1]``
    (99/49 with the defaults) so they stretch over the ``full`` range.
    """
    if family == "er":
        spec = ErdosRenyiSpec(n=n, weight_low=weights[0], weight_high=weights[1], seed=seed, **spec_kw)
        g = generate_er(spec)
    elif family == "sf":
        spec = ScaleFreeSpec(n=n, weight_low=weights[0], weight_high=weights[1], seed=seed, **spec_kw)
        g = generate_scale_free(spec)
    else:
        raise ValueError(f"family must be 'er' or 'sf', not {family!r}")
    factor = full[1] / weights[1]
    params = {"family": family, "spec": spec}
    return run_scaling_experiment(
        g, factor, WeightBounds.uniform(*full), cfg, params=params, name=f"{family}-{n}-seed{seed}"
    )


def read_names(path) -> list[str]:
    """One name per line (KONECT ``ent.*`` files); ``%`` lines are comments."""
    names = []
    with open(path) as fh:
        for line in fh:
            text = line.strip()
            if text and not text.startswith("%"):
                names.append(text)
    return names


def advogato_experiment(
    path,
    cfg: PageRankConfig = PageRankConfig(),
    top_k: int = 10,
    bounds: WeightBounds = WeightBounds.uniform(0.6, 1.0),
    names_path=None,
    fmt: EdgeListFormat = EdgeListFormat(node_ids="token", self_loops="drop"),
) -> ExperimentReport:
    """PageRank versus Black Hole Metric on the Advogato trust network.

    ``names_path`` optionally maps the (1-based, KONECT) integer ids to user
    names. Arc weights outside the three certification levels are counted in
    ``checks["unexpected_weights"]``.
    """
    parsed = parse_edge_list(path, fmt)
    labels = parsed.labels
    if names_path is not None:
        names = read_names(names_path)
        labels = [names[int(lab) - 1] if lab.isdigit() and 0 < int(lab) <= len(names) else lab for lab in labels]
    g = build_graph(len(labels), parsed.arcs, bounds, labels=labels)

    pr = _run_pagerank("PR", g, cfg, "sink")
    bh = _run_blackhole("BH", g, cfg)
    comparisons = [compare_ranks(pr.positions, bh.positions, "PR - BH")]

    pr_order = np.argsort(pr.positions.positions)
    bh_order = np.argsort(bh.positions.positions)
    top = []
    for k in range(min(top_k, g.n)):
        i, j = int(pr_order[k]), int(bh_order[k])
        top.append({
            "rank": k + 1,
            "pagerank_node": labels[i],
            "pagerank_value": float(pr.scores[i]),
            "blackhole_node": labels[j],
            "blackhole_value": float(bh.scores[j]),
        })
    unexpected = {w: c for w, c in parsed.weight_values.items() if not any(abs(w - x) < 1e-9 for x in ADVOGATO_LEVELS)}
    if unexpected:
        log.warning("%s: %d arcs carry weights outside %s", path, sum(unexpected.values()), ADVOGATO_LEVELS)
    checks = {
        "n_nodes": g.n,
        "n_arcs": g.n_arcs,
        "duplicates_collapsed": parsed.duplicates,
        "self_loops_dropped": parsed.self_loops_dropped,
        "unexpected_weights": {repr(k): v for k, v in unexpected.items()},
    }
    params = {"data": str(path), "bounds": bounds, "d": cfg.d, "tol": cfg.tol, "top_k": top_k}
    return ExperimentReport("advogato", labels, {"PR": pr, "BH": bh}, comparisons, params, checks, top)

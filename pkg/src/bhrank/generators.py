"""Seeded generators for the two synthetic families: directed Erdos-Renyi and
Bollobas-style directed preferential attachment, both with integer weights
drawn uniformly from ``[weight_low, weight_high]``.

Randomness comes from ``numpy.random.Generator(PCG64(seed))``, which gives the
same stream on every platform for a given numpy version.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bhrank.errors import SpecUnreachable
from bhrank.graph import WeightBounds, WeightedDigraph, build_graph

# ER graphs above this size use geometric skipping instead of one Bernoulli per pair
BERNOULLI_MAX_N = 10_000
MAX_RESAMPLES = 50
INITIAL_GRAPHS = {"arc": ((0, 1),), "cycle": ((0, 1), (1, 0))}


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class ErdosRenyiSpec:
    n: int
    mean_outdegree: float = 10.0
    weight_low: int = 0
    weight_high: int = 49
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.mean_outdegree < 0 or (self.n > 1 and not self.mean_outdegree < self.n):
            raise ValueError(f"mean_outdegree must lie in [0, n), got {self.mean_outdegree}")
        if not self.weight_low < self.weight_high:
            raise ValueError("weight_low must be below weight_high")

    @property
    def p(self) -> float:
        return 0.0 if self.n < 2 else self.mean_outdegree / (self.n - 1)


@dataclass(frozen=True)
class ScaleFreeSpec:
    """Parameters of the directed preferential-attachment process.

    alpha: new node with an arc *to* an existing node (chosen by in-degree)
    beta: arc between existing nodes (source by out-degree, target by in-degree)
    gamma: new node with an arc *from* an existing node (chosen by out-degree)
    initial: seed graph on nodes 0 and 1, ``"arc"`` (0 -> 1) or ``"cycle"``
    (0 -> 1 and 1 -> 0)
    """

    n: int
    alpha: float = 0.41
    beta: float = 0.54
    gamma: float = 0.05
    delta_in: float = 0.2
    delta_out: float = 0.0
    weight_low: int = 0
    weight_high: int = 49
    seed: int = 0
    initial: str = "arc"

    def __post_init__(self):
        if self.initial not in INITIAL_GRAPHS:
            raise ValueError(f"initial must be one of {sorted(INITIAL_GRAPHS)}, got {self.initial!r}")
        for name in ("alpha", "beta", "gamma"):
            x = getattr(self, name)
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {x}")
        if abs(self.alpha + self.beta + self.gamma - 1.0) > 1e-12:
            raise ValueError("alpha + beta + gamma must equal 1")
        if self.delta_in < 0 or self.delta_out < 0:
            raise ValueError("delta_in and delta_out must be non-negative")
        if self.n < 2:
            raise ValueError(f"n must be >= 2 (the process starts from two nodes), got {self.n}")
        if not self.weight_low < self.weight_high:
            raise ValueError("weight_low must be below weight_high")


def _weights(rng, m, low, high):
    return rng.integers(low, high + 1, size=m).astype(np.float64)


def generate_er(spec: ErdosRenyiSpec, bounds: WeightBounds | None = None) -> WeightedDigraph:
    """Directed G(n, p) with ``p = mean_outdegree / (n - 1)``.

    The graph's bounds default to ``[weight_low, weight_high]``.
    """
    rng = _rng(spec.seed)
    n, p = spec.n, spec.p
    if p <= 0.0:
        src = dst = np.zeros(0, np.int64)
    elif n <= BERNOULLI_MAX_N:
        src_parts, dst_parts = [], []
        for i in range(n):
            hit = np.nonzero(rng.random(n - 1) < p)[0]
            hit = hit + (hit >= i)  # skip the diagonal
            src_parts.append(np.full(len(hit), i, dtype=np.int64))
            dst_parts.append(hit.astype(np.int64))
        src = np.concatenate(src_parts)
        dst = np.concatenate(dst_parts)
    else:
        src, dst = _er_geometric(rng, n, p)
    w = _weights(rng, len(src), spec.weight_low, spec.weight_high)
    if bounds is None:
        bounds = WeightBounds.uniform(spec.weight_low, spec.weight_high)
    return build_graph(n, zip(src.tolist(), dst.tolist(), w.tolist()), bounds)


def _er_geometric(rng, n, p):
    """Sample the off-diagonal ordered pairs by jumping geometric gaps."""
    total = n * (n - 1)
    picks = []
    pos = -1
    batch = max(1024, int(total * p * 1.1))
    while True:
        gaps = rng.geometric(p, size=batch)
        idx = pos + np.cumsum(gaps)
        inside = idx[idx < total]
        picks.append(inside)
        if len(inside) < len(idx):
            break
        pos = int(idx[-1])
    k = np.concatenate(picks).astype(np.int64)
    src = k // (n - 1)
    col = k % (n - 1)
    dst = col + (col >= src)
    return src, dst


class _Endpoints:
    """Growable arrays of arc endpoints for O(1) degree-proportional picks."""

    def __init__(self, capacity):
        self.src = np.empty(capacity, dtype=np.int64)
        self.dst = np.empty(capacity, dtype=np.int64)
        self.m = 0
        self.pairs: set[tuple[int, int]] = set()

    def add(self, s, t):
        if self.m == len(self.src):
            self.src = np.concatenate([self.src, np.empty_like(self.src)])
            self.dst = np.concatenate([self.dst, np.empty_like(self.dst)])
        self.src[self.m] = s
        self.dst[self.m] = t
        self.m += 1
        self.pairs.add((s, t))


def _pick(rng, ends: _Endpoints, side, n_nodes, delta):
    """Node with probability proportional to ``degree + delta``.

    With probability ``m / (m + delta * n_nodes)`` take the endpoint of a
    uniformly chosen arc (degree-proportional), otherwise a uniform node.
    """
    m = ends.m
    if rng.random() * (m + delta * n_nodes) < m:
        k = int(rng.integers(m))
        return int(side[k])
    return int(rng.integers(n_nodes))


def generate_scale_free(spec: ScaleFreeSpec, bounds: WeightBounds | None = None, record=None) -> WeightedDigraph:
    """Grow a directed scale-free graph from a two-node seed graph.

    Arcs that would duplicate an existing arc or form a self-loop are
    resampled up to 50 times before the step is skipped. ``record``, if a
    list, receives ``(kind, accepted, n_nodes, n_arcs)`` after every step.
    """
    if spec.alpha == 0.0 and spec.gamma == 0.0:
        raise SpecUnreachable("alpha = gamma = 0: the process never adds nodes")
    rng = _rng(spec.seed)
    ends = _Endpoints(max(16, int(2.5 * spec.n)))
    for u, w in INITIAL_GRAPHS[spec.initial]:
        ends.add(u, w)
    n_nodes = 2
    a_cut = spec.alpha
    b_cut = spec.alpha + spec.beta
    while n_nodes < spec.n:
        r = rng.random()
        if r < a_cut:
            kind = "alpha"
            w = _pick(rng, ends, ends.dst[: ends.m], n_nodes, spec.delta_in)
            v = n_nodes
            n_nodes += 1
            ends.add(v, w)
            accepted = True
        elif r < b_cut:
            kind = "beta"
            accepted = False
            for _ in range(MAX_RESAMPLES):
                v = _pick(rng, ends, ends.src[: ends.m], n_nodes, spec.delta_out)
                w = _pick(rng, ends, ends.dst[: ends.m], n_nodes, spec.delta_in)
                if v != w and (v, w) not in ends.pairs:
                    ends.add(v, w)
                    accepted = True
                    break
        else:
            kind = "gamma"
            v = _pick(rng, ends, ends.src[: ends.m], n_nodes, spec.delta_out)
            w = n_nodes
            n_nodes += 1
            ends.add(v, w)
            accepted = True
        if record is not None:
            record.append((kind, accepted, n_nodes, ends.m))

    m = ends.m
    weights = _weights(rng, m, spec.weight_low, spec.weight_high)
    if bounds is None:
        bounds = WeightBounds.uniform(spec.weight_low, spec.weight_high)
    return build_graph(
        n_nodes, zip(ends.src[:m].tolist(), ends.dst[:m].tolist(), weights.tolist()), bounds
    )


def scale_weights(g: WeightedDigraph, factor: float, new_bounds: WeightBounds | None = None) -> WeightedDigraph:
    """Multiply every weight by ``factor``; topology and labels are unchanged.

    ``new_bounds`` defaults to the graph's current bounds. Raises
    WeightOutOfBounds if a scaled weight falls outside them.
    """
    if not (factor > 0 and math.isfinite(factor)):
        raise ValueError(f"factor must be positive and finite, got {factor}")
    bounds = g.bounds if new_bounds is None else new_bounds
    w = g.weight * factor
    if bounds is not None:
        # 49 * (99/49) lands one ulp below 99; snap rounding noise onto the bounds
        lo, hi = bounds.arrays(g.n)
        for edge in (lo[g.src], hi[g.src]):
            near = np.abs(w - edge) <= 1e-12 * np.maximum(1.0, np.abs(edge))
            w = np.where(near, edge, w)
    arcs = zip(g.src.tolist(), g.dst.tolist(), w.tolist())
    return build_graph(g.n, arcs, bounds, labels=g.labels)

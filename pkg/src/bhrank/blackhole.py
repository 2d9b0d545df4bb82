"""The Black Hole Metric.

Arc weights are rescaled against the node's weight scale ``[l_i, h_i]``::

    abar_ij = (r_ij - l_i) / (out_i (h_i - l_i))
    b_i     = sum_j (h_i - r_ij) / (out_i (h_i - l_i))

so every non-sink row of ``[Abar | B]`` sums to one. ``B`` feeds an extra
absorbing node (the black hole) that sends the walker back through the
personalization vector. The fast solver iterates

    pbar <- d Abar^T pbar + [1 - d (1 - S.pbar - p_b)] V^T
    p_b  <- d B.pbar

in O(|E| + N) per step. :func:`dense_oracle` builds the bordered
``(N+1) x (N+1)`` transition matrix explicitly and is meant for checking.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from bhrank import kernels
from bhrank.errors import DegenerateScale, NotConvergedWarning, TooLarge, WeightOutOfBounds
from bhrank.graph import SparseMatrix, WeightedDigraph, sink_vector
from bhrank.ranking import PageRankConfig


def bh_arc_weight(r: float, l: float, h: float, out: int) -> float:
    """Transformed weight of one arc."""
    if not h > l:
        raise DegenerateScale(f"weight scale [{l}, {h}] is empty")
    if out < 1:
        raise ValueError(f"out-degree must be >= 1, got {out}")
    if not l <= r <= h:
        raise WeightOutOfBounds(f"weight {r} outside [{l}, {h}]")
    return (r - l) / (out * (h - l))


def black_hole_weight(weights, l: float, h: float) -> float:
    """Weight of the arc from a node with outgoing ``weights`` to the black hole."""
    if not h > l:
        raise DegenerateScale(f"weight scale [{l}, {h}] is empty")
    w = np.asarray(weights, dtype=np.float64)
    if len(w) == 0:
        raise ValueError("a node without outgoing arcs has no black-hole arc")
    if np.any((w < l) | (w > h)):
        raise WeightOutOfBounds(f"weights {w.tolist()} not all within [{l}, {h}]")
    return float(np.sum((h - w) / (len(w) * (h - l))))


@dataclass(frozen=True, eq=False)
class TransformedNetwork:
    abar: SparseMatrix
    b: np.ndarray
    s: np.ndarray
    n: int


@dataclass(frozen=True, eq=False)
class BlackHoleResult:
    pbar: np.ndarray
    p_b: float
    iterations: int
    converged: bool
    residual: float

    def full_vector(self) -> np.ndarray:
        """``(pbar, p_b)`` as one length-(N+1) vector."""
        return np.append(self.pbar, self.p_b)


@dataclass(frozen=True)
class IterationScalars:
    s_p: float  # sink mass S.pbar
    b_p: float  # black-hole inflow B.pbar
    t_p: float  # T.pbar, equals 1 - p_b


def transform(g: WeightedDigraph) -> TransformedNetwork:
    """Rescale arc weights against the node bounds and attach the black-hole vector."""
    bounds = g.require_bounds()
    lo, hi = bounds.arrays(g.n)
    if np.any(~(hi > lo)):
        i = int(np.nonzero(~(hi > lo))[0][0])
        raise DegenerateScale(f"node {g.label(i)} has empty weight scale [{lo[i]}, {hi[i]}]")
    src = g.src
    out = g.outdegree[src]
    span = hi[src] - lo[src]
    values = (g.weight - lo[src]) / (out * span)
    b_terms = (hi[src] - g.weight) / (out * span)
    b = np.bincount(src, weights=b_terms, minlength=g.n).astype(np.float64)
    abar = SparseMatrix.from_triplets(src, g.dst, values, (g.n, g.n))
    b.setflags(write=False)
    s = sink_vector(g)
    s.setflags(write=False)
    return TransformedNetwork(abar, b, s, g.n)


def teleport_coefficient(d: float, s_p: float, p_b: float) -> float:
    """Mass re-injected through ``V`` in one step: ``1 - d (1 - s_p - p_b)``."""
    return 1.0 - d * (1.0 - s_p - p_b)


def blackhole_step(tn: TransformedNetwork, pbar, p_b: float, d: float, v):
    """One step of the split recurrence; returns ``(pbar, p_b, scalars)``.

    ``scalars`` describe the *input* iterate. Reference implementation for
    tests; :func:`blackhole_metric` runs the same update in a compiled loop.
    """
    pbar = np.asarray(pbar, dtype=np.float64)
    sc = IterationScalars(float(tn.s @ pbar), float(tn.b @ pbar), float(pbar.sum()))
    new = d * tn.abar.rmatvec(pbar) + teleport_coefficient(d, sc.s_p, p_b) * np.asarray(v)
    return new, d * sc.b_p, sc


def blackhole_metric(g: WeightedDigraph, cfg: PageRankConfig = PageRankConfig(), tn: TransformedNetwork | None = None) -> BlackHoleResult:
    """Black Hole Metric steady state from ``(pbar, p_b) = (V, 0)``.

    Pass a precomputed ``tn`` to skip the transform. Non-convergence is
    flagged on the result rather than raised.
    """
    tn = transform(g) if tn is None else tn
    v = cfg.personalization(g.n)
    a = tn.abar
    pbar, p_b, its, residual = kernels.blackhole_power(
        a.values, a.row_idx, a.col_ptr, np.ascontiguousarray(tn.s), np.ascontiguousarray(tn.b),
        v, cfg.d, cfg.tol, int(cfg.max_iters),
    )
    converged = residual < cfg.tol
    if not converged:
        warnings.warn(
            f"Black Hole Metric did not converge in {its} iterations (residual {residual:.3g})",
            NotConvergedWarning,
            stacklevel=2,
        )
    return BlackHoleResult(np.asarray(pbar), float(p_b), int(its), bool(converged), float(residual))


def assemble_transition(g: WeightedDigraph, d: float, v) -> np.ndarray:
    """Dense bordered transition matrix of the black-hole walk.

    Built literally as ``d (A' + S' V') + (1 - d) T' V'`` where ``A'`` borders
    ``Abar`` with the column ``B``, the black-hole entry of ``S'`` is ``1/d``,
    and ``T'`` and ``V'`` are zero at the black-hole slot. Entries come from
    the scalar formulas arc by arc, independently of :func:`transform`.
    """
    n = g.n
    bounds = g.require_bounds()
    v = np.asarray(v, dtype=np.float64)
    out_w: list[list[float]] = [[] for _ in range(n)]
    a_prime = np.zeros((n + 1, n + 1))
    for i, j, r in g.arcs():
        l, h = bounds.node(i)
        a_prime[i, j] = bh_arc_weight(r, l, h, int(g.outdegree[i]))
        out_w[i].append(r)
    s_prime = np.zeros(n + 1)
    for i in range(n):
        if out_w[i]:
            a_prime[i, n] = black_hole_weight(out_w[i], *bounds.node(i))
        else:
            s_prime[i] = 1.0
    s_prime[n] = 1.0 / d
    t_prime = np.append(np.ones(n), 0.0)
    v_prime = np.append(v, 0.0)
    return d * (a_prime + np.outer(s_prime, v_prime)) + (1.0 - d) * np.outer(t_prime, v_prime)


def dense_oracle(g: WeightedDigraph, cfg: PageRankConfig = PageRankConfig(), max_nodes: int = 200, check_rows: bool = True) -> BlackHoleResult:
    """Black Hole Metric by dense power iteration on the bordered matrix.

    Every row of the assembled matrix must sum to 1 within 1e-12.
    """
    if g.n > max_nodes:
        raise TooLarge(f"dense oracle is limited to {max_nodes} nodes, graph has {g.n}")
    v = cfg.personalization(g.n)
    m = assemble_transition(g, cfg.d, v)
    if check_rows:
        rows = m.sum(axis=1)
        worst = int(np.argmax(np.abs(rows - 1.0)))
        if abs(rows[worst] - 1.0) > 1e-12:
            raise AssertionError(f"row {worst} of the transition matrix sums to {rows[worst]!r}")
    mt = m.T.copy()
    p = np.append(v, 0.0)
    residual = np.inf
    its = 0
    for its in range(1, int(cfg.max_iters) + 1):
        q = mt @ p
        residual = float(np.abs(q - p).sum())
        p = q
        if residual < cfg.tol:
            break
    converged = residual < cfg.tol
    if not converged:
        warnings.warn("dense oracle did not converge", NotConvergedWarning, stacklevel=2)
    return BlackHoleResult(p[:-1].copy(), float(p[-1]), its, converged, residual)


def wariness(tn: TransformedNetwork, r: BlackHoleResult) -> float:
    """Network wariness ``sqrt(p_b / max P * mean(b_k + s_k))``, in ``[0, 1]``.

    ``max P`` is taken over the nodes *and* the black hole.
    """
    peak = float(max(np.max(r.pbar), r.p_b))
    if r.p_b <= 0.0 or peak <= 0.0:
        return 0.0
    unassigned = float(np.sum(tn.b + tn.s)) / tn.n
    return float(np.sqrt(min(1.0, r.p_b / peak) * unassigned))

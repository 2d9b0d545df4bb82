"""Weighted PageRank by sparse power iteration.

The transition matrix ``M = d (A + S V) + (1 - d) T V`` is never formed.
For a stochastic iterate ``P`` we have ``T^T P = 1``, so

    M^T P = d A^T P + [d (S^T P) + (1 - d)] V^T

which costs one pass over the arcs plus two length-N vector operations.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from bhrank import kernels
from bhrank.errors import LengthMismatch, NotConvergedWarning, ZeroOutStrength
from bhrank.graph import SparseMatrix, WeightedDigraph, sink_vector


@dataclass(frozen=True)
class PageRankConfig:
    """Damping ``d``, personalization ``v`` (``None`` = uniform) and stopping rule.

    ``tol`` bounds the L1 distance between successive iterates.
    """

    d: float = 0.85
    v: tuple[float, ...] | None = None
    tol: float = 1e-10
    max_iters: int = 1000

    def __post_init__(self):
        if not 0.0 < self.d < 1.0:
            raise ValueError(f"damping factor must lie strictly between 0 and 1, got {self.d}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if int(self.max_iters) < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.v is not None:
            v = np.asarray(self.v, dtype=np.float64)
            if np.any(v < 0) or not np.all(np.isfinite(v)):
                raise ValueError("personalization vector entries must be finite and non-negative")
            if abs(v.sum() - 1.0) > 1e-12:
                raise ValueError(f"personalization vector must sum to 1, sums to {v.sum()!r}")
            object.__setattr__(self, "v", tuple(v.tolist()))

    def personalization(self, n: int) -> np.ndarray:
        if self.v is None:
            return np.full(n, 1.0 / n)
        if len(self.v) != n:
            raise LengthMismatch(f"personalization vector has {len(self.v)} entries, graph has {n} nodes")
        return np.array(self.v, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class RankResult:
    p: np.ndarray
    iterations: int
    converged: bool
    residual: float


def normalize_weights(g: WeightedDigraph, zero_strength: str = "raise") -> SparseMatrix:
    """Row-normalized link matrix ``a_ij = r_ij / sum_k r_ik``.

    Sink rows stay empty. A non-sink whose weights sum to zero raises
    :class:`ZeroOutStrength`; with ``zero_strength="sink"`` its row is left
    empty instead, so the walker treats it as a sink.
    """
    if zero_strength not in ("raise", "sink"):
        raise ValueError(f"zero_strength must be 'raise' or 'sink', not {zero_strength!r}")
    strength = g.out_strength()
    dead = np.nonzero((g.outdegree > 0) & (strength <= 0))[0]
    if len(dead) and zero_strength == "raise":
        raise ZeroOutStrength(int(dead[0]), g.label(int(dead[0])))
    keep = strength[g.src] > 0
    src, dst = g.src[keep], g.dst[keep]
    values = g.weight[keep] / strength[src]
    return SparseMatrix.from_triplets(src, dst, values, (g.n, g.n))


def effective_sinks(a: SparseMatrix) -> np.ndarray:
    """Sink indicator for a normalized link matrix (rows with no stored mass)."""
    return (a.row_sums() <= 0).astype(np.float64)


def pagerank(g: WeightedDigraph, cfg: PageRankConfig = PageRankConfig(), zero_strength: str = "raise") -> RankResult:
    """Steady state of the weighted PageRank walk, iterated from ``P_0 = V``.

    Non-convergence within ``cfg.max_iters`` is reported by
    ``converged=False`` (and a :class:`NotConvergedWarning`), not an exception.
    """
    a = normalize_weights(g, zero_strength)
    sink = sink_vector(g) if zero_strength == "raise" else effective_sinks(a)
    v = cfg.personalization(g.n)
    p, its, residual = kernels.pagerank_power(
        a.values, a.row_idx, a.col_ptr, sink, v, cfg.d, cfg.tol, int(cfg.max_iters)
    )
    converged = residual < cfg.tol
    if not converged:
        warnings.warn(
            f"PageRank did not converge in {its} iterations (residual {residual:.3g})",
            NotConvergedWarning,
            stacklevel=2,
        )
    return RankResult(np.asarray(p), int(its), bool(converged), float(residual))

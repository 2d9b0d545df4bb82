"""Weighted directed graphs, weight bounds and compressed-column storage."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from bhrank import kernels
from bhrank.errors import (
    DuplicateArc,
    InvalidBounds,
    MissingBounds,
    NodeIndexOutOfRange,
    SelfLoop,
    WeightOutOfBounds,
)


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class WeightBounds:
    """Weight scale ``[low, high]``, either one pair for all nodes or one per node.

    Use :meth:`uniform` and :meth:`per_node` rather than the constructor.
    """

    low: np.ndarray
    high: np.ndarray
    is_global: bool

    @classmethod
    def uniform(cls, low: float, high: float) -> "WeightBounds":
        low, high = float(low), float(high)
        _check_pair(low, high, None)
        return cls(_frozen([low], np.float64), _frozen([high], np.float64), True)

    @classmethod
    def per_node(cls, pairs: Sequence[tuple[float, float]]) -> "WeightBounds":
        pairs = list(pairs)
        for i, (lo, hi) in enumerate(pairs):
            _check_pair(float(lo), float(hi), i)
        lo = _frozen([p[0] for p in pairs], np.float64)
        hi = _frozen([p[1] for p in pairs], np.float64)
        return cls(lo, hi, False)

    def arrays(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Per-node ``(low, high)`` arrays of length ``n``."""
        if self.is_global:
            return np.full(n, self.low[0]), np.full(n, self.high[0])
        if len(self.low) != n:
            raise InvalidBounds(f"per-node bounds cover {len(self.low)} nodes, graph has {n}")
        return np.array(self.low), np.array(self.high)

    def node(self, i: int) -> tuple[float, float]:
        if self.is_global:
            return float(self.low[0]), float(self.high[0])
        return float(self.low[i]), float(self.high[i])

    def __repr__(self):
        if self.is_global:
            return f"WeightBounds.uniform({self.low[0]:g}, {self.high[0]:g})"
        return f"WeightBounds.per_node(<{len(self.low)} nodes>)"


def _check_pair(low, high, node):
    where = "" if node is None else f" for node {node}"
    if not (np.isfinite(low) and np.isfinite(high)):
        raise InvalidBounds(f"bounds{where} must be finite, got [{low}, {high}]")
    if low < 0:
        raise InvalidBounds(f"lower bound{where} must be >= 0, got {low}")
    if not high > low:
        raise InvalidBounds(f"upper bound{where} must exceed lower bound, got [{low}, {high}]")


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Compressed column storage: ``values`` and ``row_idx`` of length nnz,
    ``col_ptr`` of length ``n_cols + 1``."""

    n_rows: int
    n_cols: int
    values: np.ndarray
    row_idx: np.ndarray
    col_ptr: np.ndarray

    def __post_init__(self):
        if len(self.col_ptr) != self.n_cols + 1:
            raise ValueError("col_ptr must have n_cols + 1 entries")
        if len(self.values) != len(self.row_idx) or self.col_ptr[-1] != len(self.values):
            raise ValueError("values/row_idx/col_ptr lengths are inconsistent")
        if np.any(np.diff(self.col_ptr) < 0):
            raise ValueError("col_ptr must be non-decreasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("matrix values must be finite")

    @classmethod
    def from_triplets(cls, rows, cols, values, shape) -> "SparseMatrix":
        n_rows, n_cols = shape
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        order = np.lexsort((rows, cols))
        counts = np.bincount(cols, minlength=n_cols)
        col_ptr = np.zeros(n_cols + 1, dtype=np.int64)
        np.cumsum(counts, out=col_ptr[1:])
        return cls(
            n_rows,
            n_cols,
            _frozen(values[order], np.float64),
            _frozen(rows[order], np.int64),
            _frozen(col_ptr, np.int64),
        )

    @property
    def nnz(self) -> int:
        return len(self.values)

    def storage_size(self) -> int:
        """Number of stored scalars, ``2 nnz + n_cols + 1``."""
        return len(self.values) + len(self.row_idx) + len(self.col_ptr)

    def matvec(self, x) -> np.ndarray:
        x = np.ascontiguousarray(x, dtype=np.float64)
        return kernels.csc_matvec(self.values, self.row_idx, self.col_ptr, x, self.n_rows)

    def rmatvec(self, x) -> np.ndarray:
        """``A.T @ x``."""
        x = np.ascontiguousarray(x, dtype=np.float64)
        return kernels.csc_rmatvec(self.values, self.row_idx, self.col_ptr, x)

    def row_sums(self) -> np.ndarray:
        return np.bincount(self.row_idx, weights=self.values, minlength=self.n_rows).astype(np.float64)

    def toarray(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols))
        cols = np.repeat(np.arange(self.n_cols), np.diff(self.col_ptr))
        out[self.row_idx, cols] = self.values
        return out

    def entry(self, i: int, j: int) -> float:
        lo, hi = self.col_ptr[j], self.col_ptr[j + 1]
        hit = np.nonzero(self.row_idx[lo:hi] == i)[0]
        return float(self.values[lo + hit[0]]) if len(hit) else 0.0


@dataclass(frozen=True, eq=False)
class WeightedDigraph:
    """Immutable weighted digraph with arcs sorted by ``(src, dst)``.

    Build through :func:`build_graph`, which validates the invariants.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    bounds: WeightBounds | None = None
    labels: tuple[str, ...] | None = None
    outdegree: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "outdegree", _frozen(np.bincount(self.src, minlength=self.n), np.int64)
        )

    @property
    def n_arcs(self) -> int:
        return len(self.src)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def node_labels(self) -> list[str]:
        return list(self.labels) if self.labels is not None else [str(i) for i in range(self.n)]

    def arcs(self):
        """Yield ``(src, dst, weight)`` tuples in canonical order."""
        for s, t, w in zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist()):
            yield s, t, w

    def out_strength(self) -> np.ndarray:
        return np.bincount(self.src, weights=self.weight, minlength=self.n).astype(np.float64)

    def require_bounds(self) -> WeightBounds:
        if self.bounds is None:
            raise MissingBounds("this operation needs weight bounds; none were given for the graph")
        return self.bounds

    def with_bounds(self, bounds: WeightBounds | None) -> "WeightedDigraph":
        """Same arcs under different bounds (re-validated)."""
        return build_graph(self.n, self.arcs(), bounds, labels=self.labels)

    def link_weights(self) -> SparseMatrix:
        """Raw weights ``r_ij`` as a sparse matrix."""
        return SparseMatrix.from_triplets(self.src, self.dst, self.weight, (self.n, self.n))


def build_graph(
    n: int,
    arcs: Iterable[tuple[int, int, float]],
    bounds: WeightBounds | None = None,
    labels: Sequence[str] | None = None,
) -> WeightedDigraph:
    """Validate ``arcs`` and return a :class:`WeightedDigraph`.

    Raises DuplicateArc, SelfLoop, NodeIndexOutOfRange, WeightOutOfBounds or
    InvalidBounds when an invariant is violated.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"a graph needs at least one node, got n={n}")
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise ValueError(f"{len(labels)} labels for {n} nodes")

    triples = list(arcs)
    if triples:
        src = np.array([a[0] for a in triples], dtype=np.int64)
        dst = np.array([a[1] for a in triples], dtype=np.int64)
        w = np.array([a[2] for a in triples], dtype=np.float64)
    else:
        src = np.zeros(0, np.int64)
        dst = np.zeros(0, np.int64)
        w = np.zeros(0, np.float64)

    name = (lambda i: labels[i]) if labels is not None else str
    bad = np.nonzero((src < 0) | (src >= n) | (dst < 0) | (dst >= n))[0]
    if len(bad):
        k = bad[0]
        raise NodeIndexOutOfRange(f"arc {src[k]}->{dst[k]} references a node outside 0..{n - 1}")
    loops = np.nonzero(src == dst)[0]
    if len(loops):
        raise SelfLoop(f"self-loop on node {name(int(src[loops[0]]))}")
    bad = np.nonzero(~np.isfinite(w) | (w < 0))[0]
    if len(bad):
        k = bad[0]
        raise WeightOutOfBounds(
            f"arc {name(int(src[k]))}->{name(int(dst[k]))} has invalid weight {w[k]} "
            "(weights must be finite and non-negative)"
        )

    order = np.lexsort((dst, src))
    src, dst, w = src[order], dst[order], w[order]
    dup = np.nonzero((src[1:] == src[:-1]) & (dst[1:] == dst[:-1]))[0]
    if len(dup):
        k = dup[0]
        raise DuplicateArc(f"arc {name(int(src[k]))}->{name(int(dst[k]))} appears more than once")

    if bounds is not None:
        lo, hi = bounds.arrays(n)
        out = np.nonzero((w < lo[src]) | (w > hi[src]))[0]
        if len(out):
            k = out[0]
            s = int(src[k])
            raise WeightOutOfBounds(
                f"arc {name(s)}->{name(int(dst[k]))} has weight {w[k]:g} outside "
                f"[{lo[s]:g}, {hi[s]:g}] (bounds of node {name(s)})"
            )

    return WeightedDigraph(
        n,
        _frozen(src, np.int64),
        _frozen(dst, np.int64),
        _frozen(w, np.float64),
        bounds,
        labels,
    )


def sink_vector(g: WeightedDigraph) -> np.ndarray:
    """0/1 float vector, 1 where the node has no outgoing arcs."""
    return (g.outdegree == 0).astype(np.float64)

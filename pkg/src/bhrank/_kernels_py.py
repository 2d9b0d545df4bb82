"""Numpy implementations of the hot kernels.

Signatures mirror ``_kernels.pyx`` exactly so either module can back
:mod:`bhrank.kernels`. Sparse matrices arrive as raw compressed-column
arrays: ``values`` (float64), ``row_idx`` (int64), ``col_ptr`` (int64,
length ``n_cols + 1``).
"""
import numpy as np


def _column_of_entry(col_ptr):
    n_cols = len(col_ptr) - 1
    return np.repeat(np.arange(n_cols, dtype=np.int64), np.diff(col_ptr))


def csc_rmatvec(values, row_idx, col_ptr, x):
    """Return ``A.T @ x``, streaming the columns of ``A``."""
    n_cols = len(col_ptr) - 1
    cols = _column_of_entry(col_ptr)
    return np.bincount(cols, weights=values * x[row_idx], minlength=n_cols).astype(np.float64)


def csc_matvec(values, row_idx, col_ptr, x, n_rows):
    """Return ``A @ x``."""
    cols = _column_of_entry(col_ptr)
    return np.bincount(row_idx, weights=values * x[cols], minlength=n_rows).astype(np.float64)


def pagerank_power(values, row_idx, col_ptr, sink, v, d, tol, max_iters):
    """Iterate ``p <- d A^T p + (d s.p + 1 - d) v`` from ``p = v``.

    Returns ``(p, iterations, residual)`` where residual is the L1 distance
    between the last two iterates.
    """
    cols = _column_of_entry(col_ptr)
    n = len(v)
    p = np.array(v, dtype=np.float64)
    residual = np.inf
    it = 0
    for it in range(1, max_iters + 1):
        link = np.bincount(cols, weights=values * p[row_idx], minlength=n).astype(np.float64)
        coef = d * float(sink @ p) + (1.0 - d)
        q = d * link + coef * v
        residual = float(np.abs(q - p).sum())
        p = q
        if residual < tol:
            break
    return p, it, residual


def blackhole_power(values, row_idx, col_ptr, sink, b, v, d, tol, max_iters):
    """Iterate the split black-hole recurrence from ``(pbar, p_b) = (v, 0)``.

    ``pbar <- d Abar^T pbar + [1 - d (1 - s.pbar - p_b)] v`` and
    ``p_b <- d b.pbar``. Returns ``(pbar, p_b, iterations, residual)``;
    the residual is the L1 step over ``pbar`` and ``p_b`` together.
    """
    cols = _column_of_entry(col_ptr)
    n = len(v)
    p = np.array(v, dtype=np.float64)
    pb = 0.0
    residual = np.inf
    it = 0
    for it in range(1, max_iters + 1):
        link = np.bincount(cols, weights=values * p[row_idx], minlength=n).astype(np.float64)
        s_p = float(sink @ p)
        b_p = float(b @ p)
        q = d * link + (1.0 - d * (1.0 - s_p - pb)) * v
        qb = d * b_p
        residual = float(np.abs(q - p).sum()) + abs(qb - pb)
        p, pb = q, qb
        if residual < tol:
            break
    return p, pb, it, residual

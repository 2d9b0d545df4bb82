"""Independent dense references, written directly from the matrix definitions."""
import numpy as np


def dense_pagerank(g, d=0.85, iters=5000, tol=1e-15):
    """Power iteration on the explicitly assembled M = d (A + S V) + (1 - d) T V."""
    n = g.n
    r = np.zeros((n, n))
    for i, j, w in g.arcs():
        r[i, j] = w
    strength = r.sum(axis=1)
    a = np.zeros((n, n))
    for i in range(n):
        if strength[i] > 0:
            a[i] = r[i] / strength[i]
    s = (a.sum(axis=1) == 0).astype(float)
    v = np.full(n, 1.0 / n)
    m = d * (a + np.outer(s, v)) + (1 - d) * np.outer(np.ones(n), v)
    p = v.copy()
    for _ in range(iters):
        q = m.T @ p
        if np.abs(q - p).sum() < tol:
            return q
        p = q
    return p


def eigen_blackhole(g, d=0.85):
    """Stationary vector of the bordered chain from a linear solve (no iteration)."""
    n = g.n
    lo, hi = g.bounds.arrays(n)
    abar = np.zeros((n, n))
    b = np.zeros(n)
    out = np.bincount(g.src, minlength=n)
    for i, j, w in g.arcs():
        abar[i, j] = (w - lo[i]) / (out[i] * (hi[i] - lo[i]))
        b[i] += (hi[i] - w) / (out[i] * (hi[i] - lo[i]))
    s = (out == 0).astype(float)
    v = np.full(n, 1.0 / n)
    m = np.zeros((n + 1, n + 1))
    m[:n, :n] = d * (abar + np.outer(s, v)) + (1 - d) * np.outer(np.ones(n), v)
    m[:n, n] = d * b
    m[n, :n] = v
    # solve (M^T - I) x = 0 with sum(x) = 1
    lhs = np.vstack([m.T - np.eye(n + 1), np.ones(n + 1)])
    rhs = np.append(np.zeros(n + 1), 1.0)
    x, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    return x[:n], x[n]

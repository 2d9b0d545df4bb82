# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled power-iteration kernels (same contracts as ``_kernels_py``)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY

cnp.import_array()

ctypedef cnp.float64_t f64
ctypedef cnp.int64_t i64


def csc_rmatvec(const f64[::1] values, const i64[::1] row_idx,
                const i64[::1] col_ptr, const f64[::1] x):
    cdef Py_ssize_t n_cols = col_ptr.shape[0] - 1
    cdef Py_ssize_t j, k
    cdef f64 acc
    out = np.empty(n_cols, dtype=np.float64)
    cdef f64[::1] o = out
    with nogil:
        for j in range(n_cols):
            acc = 0.0
            for k in range(col_ptr[j], col_ptr[j + 1]):
                acc += values[k] * x[row_idx[k]]
            o[j] = acc
    return out


def csc_matvec(const f64[::1] values, const i64[::1] row_idx,
               const i64[::1] col_ptr, const f64[::1] x, Py_ssize_t n_rows):
    cdef Py_ssize_t n_cols = col_ptr.shape[0] - 1
    cdef Py_ssize_t j, k
    out = np.zeros(n_rows, dtype=np.float64)
    cdef f64[::1] o = out
    with nogil:
        for j in range(n_cols):
            for k in range(col_ptr[j], col_ptr[j + 1]):
                o[row_idx[k]] += values[k] * x[j]
    return out


cdef inline f64 _dot(const f64[::1] a, f64[::1] b) noexcept nogil:
    cdef Py_ssize_t i
    cdef f64 acc = 0.0
    for i in range(a.shape[0]):
        acc += a[i] * b[i]
    return acc


def pagerank_power(const f64[::1] values, const i64[::1] row_idx,
                   const i64[::1] col_ptr, const f64[::1] sink,
                   const f64[::1] v, double d, double tol, Py_ssize_t max_iters):
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t j, k, it = 0
    cdef f64 acc, coef, residual = INFINITY
    p_arr = np.array(v, dtype=np.float64)
    q_arr = np.empty(n, dtype=np.float64)
    cdef f64[::1] p = p_arr
    cdef f64[::1] q = q_arr
    cdef f64[::1] tmp
    with nogil:
        while it < max_iters:
            it += 1
            coef = d * _dot(sink, p) + (1.0 - d)
            residual = 0.0
            for j in range(n):
                acc = 0.0
                for k in range(col_ptr[j], col_ptr[j + 1]):
                    acc += values[k] * p[row_idx[k]]
                q[j] = d * acc + coef * v[j]
                residual += fabs(q[j] - p[j])
            tmp = p
            p = q
            q = tmp
            if residual < tol:
                break
    return np.asarray(p).copy(), it, residual


def blackhole_power(const f64[::1] values, const i64[::1] row_idx,
                    const i64[::1] col_ptr, const f64[::1] sink,
                    const f64[::1] b, const f64[::1] v, double d, double tol,
                    Py_ssize_t max_iters):
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t j, k, it = 0
    cdef f64 acc, coef, s_p, b_p, qb, pb = 0.0, residual = INFINITY
    p_arr = np.array(v, dtype=np.float64)
    q_arr = np.empty(n, dtype=np.float64)
    cdef f64[::1] p = p_arr
    cdef f64[::1] q = q_arr
    cdef f64[::1] tmp
    with nogil:
        while it < max_iters:
            it += 1
            s_p = _dot(sink, p)
            b_p = _dot(b, p)
            coef = 1.0 - d * (1.0 - s_p - pb)
            residual = 0.0
            for j in range(n):
                acc = 0.0
                for k in range(col_ptr[j], col_ptr[j + 1]):
                    acc += values[k] * p[row_idx[k]]
                q[j] = d * acc + coef * v[j]
                residual += fabs(q[j] - p[j])
            qb = d * b_p
            residual += fabs(qb - pb)
            pb = qb
            tmp = p
            p = q
            q = tmp
            if residual < tol:
                break
    return np.asarray(p).copy(), pb, it, residual

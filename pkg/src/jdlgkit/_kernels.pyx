# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled power-iteration kernels.

Both routines keep the whole iteration in C and call BLAS directly, so the
per-step cost for the small matrices of this package is the arithmetic
rather than interpreter overhead.
"""

import numpy as np

from scipy.linalg.cython_blas cimport zaxpy, zgemm


cdef void _matmul(const double complex* A, const double complex* B, double complex* C, int n, int m) noexcept nogil:
    # row-major C (n x m) = A (n x n) @ B (n x m), via column-major C^T = B^T A^T
    cdef char tr = b'N'
    cdef double complex one = 1.0, zero = 0.0
    zgemm(&tr, &tr, &m, &n, &n, &one, B, &m, A, &n, &zero, C, &m)


def power_orbit(T, X0, Py_ssize_t steps):
    """Return out with out[k] = T^k @ X0 for k = 0..steps."""
    cdef const double complex[:, ::1] Tv = np.ascontiguousarray(T, dtype=np.complex128)
    cdef const double complex[:, ::1] Xv = np.ascontiguousarray(X0, dtype=np.complex128)
    cdef int n = Tv.shape[0], m = Xv.shape[1]
    if Tv.shape[1] != n or Xv.shape[0] != n:
        raise ValueError("shape mismatch")
    out = np.empty((steps + 1, n, m), dtype=np.complex128)
    cdef double complex[:, :, ::1] ov = out
    ov[0, :, :] = Xv
    cdef Py_ssize_t k
    with nogil:
        for k in range(steps):
            _matmul(&Tv[0, 0], &ov[k, 0, 0], &ov[k + 1, 0, 0], n, m)
    return out


def weighted_power_sum(T, X0, W):
    """Return acc with acc[l] = sum_j W[l, j] * T^j @ X0."""
    cdef const double complex[:, ::1] Tv = np.ascontiguousarray(T, dtype=np.complex128)
    cdef const double complex[:, ::1] Wv = np.ascontiguousarray(W, dtype=np.complex128)
    cur_arr = np.array(X0, dtype=np.complex128, order="C", copy=True)
    cdef double complex[:, ::1] cur = cur_arr
    cdef int n = Tv.shape[0], m = cur.shape[1]
    if Tv.shape[1] != n or cur.shape[0] != n:
        raise ValueError("shape mismatch")
    cdef Py_ssize_t L = Wv.shape[0], J = Wv.shape[1], j, l
    acc = np.zeros((L, n, m), dtype=np.complex128)
    cdef double complex[:, :, ::1] av = acc
    nxt_arr = np.empty((n, m), dtype=np.complex128)
    cdef double complex[:, ::1] nxt = nxt_arr
    cdef double complex* a = &cur[0, 0]
    cdef double complex* b = &nxt[0, 0]
    cdef double complex* tmp
    cdef int size = n * m, inc = 1
    cdef double complex w
    with nogil:
        for j in range(J):
            for l in range(L):
                w = Wv[l, j]
                zaxpy(&size, &w, a, &inc, &av[l, 0, 0], &inc)
            if j + 1 < J:
                _matmul(&Tv[0, 0], a, b, n, m)
                tmp = a
                a = b
                b = tmp
    return acc

# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled subset scan over per-block Gram matrices.

Same contract as the pure-Python module: for each candidate subset,
accumulate over blocks the squared residual of the target row after
projecting out the subset's rows, using a left-looking Cholesky on the
subset Gram that drops near-dependent columns (pivot below rank_tol^2
times the column's squared norm), then add the cardinality penalty.
"""

from libc.math cimport sqrt

import numpy as np

BACKEND = "cython"

MAX_T = 64  # also the literal array bound below


cdef double _residual_one(const double[:, ::1] G, const int[:] idx, int t,
                          int target, double rank_tol) noexcept nogil:
    cdef double L[64][64]
    cdef double y[64]
    cdef unsigned char kept[64]
    cdef int k, r, m
    cdef double akk, d, acc
    cdef double gii = G[target, target]
    if t == 0:
        return gii
    for k in range(t):
        akk = G[idx[k], idx[k]]
        d = akk
        for m in range(k):
            if kept[m]:
                d -= L[k][m] * L[k][m]
        if akk <= 0.0 or d <= rank_tol * rank_tol * akk:
            kept[k] = 0
            for r in range(t):
                L[r][k] = 0.0
            continue
        kept[k] = 1
        L[k][k] = sqrt(d)
        for r in range(k + 1, t):
            acc = G[idx[r], idx[k]]
            for m in range(k):
                if kept[m]:
                    acc -= L[r][m] * L[k][m]
            L[r][k] = acc / L[k][k]
    for k in range(t):
        if not kept[k]:
            y[k] = 0.0
            continue
        acc = G[idx[k], target]
        for m in range(k):
            acc -= L[k][m] * y[m]
        y[k] = acc / L[k][k]
    acc = gii
    for k in range(t):
        acc -= y[k] * y[k]
    if acc < 0.0:
        acc = 0.0
    return acc


def subset_objectives(double[:, :, ::1] grams, int target, int[:, ::1] subsets,
                      int[:] sizes, n_total, double lam, double rank_tol):
    """Penalized residual objective for every candidate subset.

    grams: (B, p, p) per-block Gram matrices (C-contiguous float64).
    subsets: (n, s_max) int32 rows padded with -1; sizes: (n,) cardinalities.
    Returns (n,) float64 array of (1/N) * sum_b residual + lam * |T|.
    """
    cdef Py_ssize_t n = subsets.shape[0]
    cdef Py_ssize_t B = grams.shape[0]
    cdef double inv_n = 1.0 / <double> n_total
    cdef Py_ssize_t j, b
    cdef double total
    if subsets.shape[1] > MAX_T:
        raise ValueError(f"subset size limit is {MAX_T}")
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[:] out = out_arr
    with nogil:
        for j in range(n):
            total = 0.0
            for b in range(B):
                total += _residual_one(grams[b], subsets[j], sizes[j], target, rank_tol)
            out[j] = total * inv_n + lam * sizes[j]
    return out_arr

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dynamic-programming kernels: unit-cost DTW and LCS length.

Mirrors gazemap.kernels._pure exactly; both backends must return
bit-identical results (all arithmetic is exact on small integers).
"""

from libc.stdlib cimport free, malloc


def dtw_unit(int[:] a, int[:] b):
    """Minimal accumulated cost over monotone warping paths, unit step cost."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    cdef Py_ssize_t i, j
    cdef double cost, best
    cdef double INF = float("inf")
    cdef double *prev = <double *> malloc((m + 1) * sizeof(double))
    cdef double *cur = <double *> malloc((m + 1) * sizeof(double))
    cdef double *tmp
    if prev is NULL or cur is NULL:
        free(prev)
        free(cur)
        raise MemoryError()
    try:
        for j in range(m + 1):
            prev[j] = INF
        prev[0] = 0.0
        for i in range(1, n + 1):
            cur[0] = INF
            for j in range(1, m + 1):
                cost = 0.0 if a[i - 1] == b[j - 1] else 1.0
                best = prev[j]
                if cur[j - 1] < best:
                    best = cur[j - 1]
                if prev[j - 1] < best:
                    best = prev[j - 1]
                cur[j] = cost + best
            tmp = prev
            prev = cur
            cur = tmp
        return prev[m]
    finally:
        free(prev)
        free(cur)


def lcs_length(int[:] a, int[:] b):
    """Longest-common-subsequence length (match=1, mismatch=0, gap=0 score)."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    cdef Py_ssize_t i, j
    cdef long up, left
    cdef long *prev = <long *> malloc((m + 1) * sizeof(long))
    cdef long *cur = <long *> malloc((m + 1) * sizeof(long))
    cdef long *tmp
    if prev is NULL or cur is NULL:
        free(prev)
        free(cur)
        raise MemoryError()
    try:
        for j in range(m + 1):
            prev[j] = 0
        for i in range(1, n + 1):
            cur[0] = 0
            for j in range(1, m + 1):
                if a[i - 1] == b[j - 1]:
                    cur[j] = prev[j - 1] + 1
                else:
                    up = prev[j]
                    left = cur[j - 1]
                    cur[j] = up if up >= left else left
            tmp = prev
            prev = cur
            cur = tmp
        return prev[m]
    finally:
        free(prev)
        free(cur)

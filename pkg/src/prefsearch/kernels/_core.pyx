# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dominance kernel: pairwise Pareto relations over a cost matrix."""

import numpy as np


def pareto_masks(costs):
    """Same contract as `prefsearch.kernels._fallback.pareto_masks`."""
    cdef double[:, ::1] c = np.ascontiguousarray(costs, dtype=np.float64)
    cdef Py_ssize_t m = c.shape[0]
    cdef Py_ssize_t n = c.shape[1]
    dominates = np.zeros((n, n), dtype=bool)
    equals = np.zeros((n, n), dtype=bool)
    cdef unsigned char[:, ::1] dom = dominates.view(np.uint8)
    cdef unsigned char[:, ::1] eq = equals.view(np.uint8)
    cdef Py_ssize_t i, j, p
    cdef bint le_all, lt_any
    with nogil:
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                le_all = True
                lt_any = False
                for p in range(m):
                    if c[p, i] > c[p, j]:
                        le_all = False
                        break
                    elif c[p, i] < c[p, j]:
                        lt_any = True
                if le_all:
                    if lt_any:
                        dom[i, j] = 1
                    else:
                        eq[i, j] = 1
    return dominates, equals

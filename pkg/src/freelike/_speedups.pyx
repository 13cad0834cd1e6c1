# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: reduced-word DFS enumeration and percolation trials.

Mirrors freelike._purekernels exactly; freelike._kernels picks whichever
imports.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize

import numpy as np

BACKEND = "compiled"


def scan_reduced_subtree(int rank, int max_len, long long guard_len,
                         int first_letter, int collect_limit=1000000):
    """DFS over freely reduced words starting with one fixed first letter.

    Returns (count, undecided); see _purekernels.scan_reduced_subtree.
    """
    cdef int nsym = 2 * rank
    if first_letter < 0 or first_letter >= nsym:
        raise ValueError("first_letter out of range")
    if max_len < 1 or max_len > 64:
        raise ValueError("max_len must be in 1..64")
    undecided = []
    cdef unsigned char letter[64]
    cdef int nxt[65]
    cdef long long count = 1
    cdef int depth, c
    cdef bint overflow = 0
    letter[0] = <unsigned char> first_letter
    if 2 > guard_len:
        undecided.append(PyBytes_FromStringAndSize(<char*> &letter[0], 1))
    if max_len == 1:
        return count, undecided
    depth = 1
    nxt[1] = 0
    with nogil:
        while depth >= 1:
            if depth == max_len:
                depth -= 1
                continue
            c = nxt[depth]
            if c >= nsym:
                depth -= 1
                continue
            nxt[depth] = c + 1
            if c == (letter[depth - 1] ^ 1):
                continue
            letter[depth] = <unsigned char> c
            depth += 1
            count += 1
            if 2 * depth > guard_len:
                with gil:
                    if len(undecided) >= collect_limit:
                        overflow = 1
                        break
                    undecided.append(
                        PyBytes_FromStringAndSize(<char*> &letter[0], depth))
            nxt[depth] = 0
    if overflow:
        raise MemoryError("undecided word collection exceeded limit")
    return count, undecided


cdef inline int _find(int* parent, int x) nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def crossing_from_uniforms(const int[::1] eu, const int[::1] ev,
                           const double[::1] uniforms, double p,
                           int n, int root,
                           const unsigned char[::1] target_mask):
    """Does the root reach the target through edges with uniform < p?"""
    cdef Py_ssize_t E = eu.shape[0]
    cdef Py_ssize_t i
    cdef int ra, rb, rr
    cdef bint hit = 0
    parent_arr = np.arange(n, dtype=np.int32)
    cdef int[::1] parent_mv = parent_arr
    cdef int* parent = &parent_mv[0] if n > 0 else NULL
    with nogil:
        for i in range(E):
            if uniforms[i] < p:
                ra = _find(parent, eu[i])
                rb = _find(parent, ev[i])
                if ra != rb:
                    parent[rb] = ra
        rr = _find(parent, root)
        for i in range(n):
            if target_mask[i] and _find(parent, <int> i) == rr:
                hit = 1
                break
    return bool(hit)


def component_labels(int n, const int[::1] eu, const int[::1] ev,
                     const unsigned char[::1] open_mask):
    """Label vertices by the minimum vertex index of their open component."""
    cdef Py_ssize_t E = eu.shape[0]
    cdef Py_ssize_t i
    cdef int ra, rb, r
    parent_arr = np.arange(n, dtype=np.int32)
    labels_arr = np.empty(n, dtype=np.int64)
    best_arr = np.full(n, -1, dtype=np.int64)
    cdef int[::1] parent_mv = parent_arr
    cdef long long[::1] labels = labels_arr
    cdef long long[::1] best = best_arr
    cdef int* parent = &parent_mv[0] if n > 0 else NULL
    with nogil:
        for i in range(E):
            if open_mask[i]:
                ra = _find(parent, eu[i])
                rb = _find(parent, ev[i])
                if ra != rb:
                    parent[rb] = ra
        for i in range(n):
            r = _find(parent, <int> i)
            if best[r] < 0:
                best[r] = i
        for i in range(n):
            labels[i] = best[_find(parent, <int> i)]
    return labels_arr

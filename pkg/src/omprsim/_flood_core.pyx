# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled flood kernel; must match ``_flood_py.flood`` exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef enum:
    RULE_ANY = 0
    RULE_FIRST = 1

ANY = RULE_ANY
FIRST = RULE_FIRST


def flood(const int[::1] indptr, const int[::1] indices,
          const unsigned char[::1] edge_ok, const unsigned char[::1] node_ok,
          int source, int rule=RULE_FIRST):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    hops_arr = np.full(n, -1, dtype=np.int32)
    sent_arr = np.zeros(n, dtype=np.uint8)
    frontier_arr = np.empty(n, dtype=np.int32)
    reached_arr = np.empty(n, dtype=np.int32)
    parent_arr = np.empty(n, dtype=np.int32)
    eligible_arr = np.zeros(n, dtype=np.uint8)
    cdef int[::1] hops = hops_arr
    cdef unsigned char[::1] sent = sent_arr
    cdef int[::1] frontier = frontier_arr
    cdef int[::1] reached = reached_arr
    cdef int[::1] parent = parent_arr
    cdef unsigned char[::1] eligible = eligible_arr
    cdef Py_ssize_t nf = 1, nr, i, e, k
    cdef int u, v, h = 0

    hops[source] = 0
    sent[source] = 1
    frontier[0] = source
    with nogil:
        while nf > 0:
            nr = 0
            for i in range(nf):
                u = frontier[i]
                for e in range(indptr[u], indptr[u + 1]):
                    v = indices[e]
                    if hops[v] == -1:
                        hops[v] = h + 1
                        reached[nr] = v
                        nr += 1
                        parent[v] = u
                        eligible[v] = edge_ok[e]
                    elif hops[v] == h + 1:
                        if rule == RULE_ANY:
                            if edge_ok[e]:
                                eligible[v] = 1
                        elif u < parent[v]:
                            parent[v] = u
                            eligible[v] = edge_ok[e]
            nf = 0
            for k in range(nr):
                v = reached[k]
                if eligible[v] and node_ok[v]:
                    sent[v] = 1
                    frontier[nf] = v
                    nf += 1
            h += 1
    return hops_arr, sent_arr

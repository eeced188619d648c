# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels.  Same contract as ``_kernels_py``."""

from libc.stdlib cimport malloc, free, qsort
from libc.stdint cimport int64_t, uint64_t


def scc_labels(int n, const int[:] src, const int[:] tgt,
               const unsigned char[:] state_alive, const unsigned char[:] edge_alive):
    cdef Py_ssize_t m = src.shape[0]
    cdef Py_ssize_t e
    cdef int v, w, u, root, counter = 0, ncomp = 0, sp = 0, wp = 0, p
    cdef int *start = <int *> malloc((n + 1) * sizeof(int))
    cdef int *fill = <int *> malloc((n + 1) * sizeof(int))
    cdef int *adj = <int *> malloc((m + 1) * sizeof(int))
    cdef int *index = <int *> malloc((n + 1) * sizeof(int))
    cdef int *low = <int *> malloc((n + 1) * sizeof(int))
    cdef unsigned char *on_stack = <unsigned char *> malloc(n + 1)
    cdef int *comp = <int *> malloc((n + 1) * sizeof(int))
    cdef int *stack = <int *> malloc((n + 1) * sizeof(int))
    cdef int *work_v = <int *> malloc((n + 1) * sizeof(int))
    cdef int *work_p = <int *> malloc((n + 1) * sizeof(int))
    try:
        for v in range(n + 1):
            start[v] = 0
        for e in range(m):
            if edge_alive[e] and state_alive[src[e]] and state_alive[tgt[e]]:
                start[src[e] + 1] += 1
        for v in range(n):
            start[v + 1] += start[v]
        for v in range(n + 1):
            fill[v] = start[v]
        for e in range(m):
            if edge_alive[e] and state_alive[src[e]] and state_alive[tgt[e]]:
                adj[fill[src[e]]] = tgt[e]
                fill[src[e]] += 1
        for v in range(n):
            index[v] = -1
            on_stack[v] = 0
            comp[v] = -1

        for root in range(n):
            if not state_alive[root] or index[root] != -1:
                continue
            index[root] = counter
            low[root] = counter
            counter += 1
            stack[sp] = root
            sp += 1
            on_stack[root] = 1
            work_v[0] = root
            work_p[0] = start[root]
            wp = 1
            while wp > 0:
                v = work_v[wp - 1]
                p = work_p[wp - 1]
                if p < start[v + 1]:
                    work_p[wp - 1] = p + 1
                    w = adj[p]
                    if index[w] == -1:
                        index[w] = counter
                        low[w] = counter
                        counter += 1
                        stack[sp] = w
                        sp += 1
                        on_stack[w] = 1
                        work_v[wp] = w
                        work_p[wp] = start[w]
                        wp += 1
                    elif on_stack[w] and index[w] < low[v]:
                        low[v] = index[w]
                    continue
                wp -= 1
                if wp > 0:
                    u = work_v[wp - 1]
                    if low[v] < low[u]:
                        low[u] = low[v]
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        w = stack[sp]
                        on_stack[w] = 0
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
        return [comp[v] for v in range(n)]
    finally:
        free(start); free(fill); free(adj); free(index); free(low)
        free(on_stack); free(comp); free(stack); free(work_v); free(work_p)


cdef struct Offer:
    int64_t state
    int64_t label
    uint64_t mask


cdef int _cmp_offer(const void *a, const void *b) noexcept nogil:
    cdef const Offer *x = <const Offer *> a
    cdef const Offer *y = <const Offer *> b
    if x.state != y.state:
        return -1 if x.state < y.state else 1
    if x.label != y.label:
        return -1 if x.label < y.label else 1
    if x.mask != y.mask:
        return -1 if x.mask < y.mask else 1
    return 0


def noninterference_violations(int n, const int[:] src, const int[:] tgt,
                               const int[:] label, const uint64_t[:] mask):
    cdef Py_ssize_t m = src.shape[0]
    cdef Py_ssize_t e, i, j, t, v
    cdef Offer key
    cdef Offer *offers = <Offer *> malloc((m + 1) * sizeof(Offer))
    cdef int *order = <int *> malloc((m + 1) * sizeof(int))
    cdef int *start = <int *> malloc((n + 1) * sizeof(int))
    cdef int *fill = <int *> malloc((n + 1) * sizeof(int))
    bad = []
    try:
        for e in range(m):
            offers[e].state = src[e]
            offers[e].label = label[e]
            offers[e].mask = mask[e]
        qsort(offers, m, sizeof(Offer), _cmp_offer)
        for i in range(n + 1):
            start[i] = 0
        for e in range(m):
            start[src[e] + 1] += 1
        for i in range(n):
            start[i + 1] += start[i]
        for i in range(n + 1):
            fill[i] = start[i]
        for e in range(m):
            order[fill[src[e]]] = <int> e
            fill[src[e]] += 1
        for i in range(n):
            for j in range(start[i], start[i + 1]):
                t = order[j]
                for e in range(start[i], start[i + 1]):
                    v = order[e]
                    if mask[t] & mask[v]:
                        continue
                    key.state = tgt[v]
                    key.label = label[t]
                    key.mask = mask[t]
                    if not _contains(offers, m, &key):
                        bad.append((t, v))
        bad.sort()
        return bad
    finally:
        free(offers); free(order); free(start); free(fill)


cdef bint _contains(Offer *offers, Py_ssize_t m, Offer *key):
    cdef Py_ssize_t lo = 0, hi = m, mid
    cdef int c
    while lo < hi:
        mid = (lo + hi) // 2
        c = _cmp_offer(&offers[mid], key)
        if c == 0:
            return True
        if c < 0:
            lo = mid + 1
        else:
            hi = mid
    return False

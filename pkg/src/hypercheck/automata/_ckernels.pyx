# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``_pykernels``. Masks must fit in 64 bits."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport free, malloc


def partition_regions(cubes):
    cdef list regions = [(0, 0)]
    cdef list out
    cdef uint64_t cpos, cneg, rpos, rneg, free_pos, free_neg, p, n, bit
    for c in cubes:
        cpos = c[0]
        cneg = c[1]
        out = []
        for r in regions:
            rpos = r[0]
            rneg = r[1]
            if (rpos & cneg) or (rneg & cpos):
                out.append(r)
                continue
            free_pos = cpos & ~rpos
            free_neg = cneg & ~rneg
            if not free_pos and not free_neg:
                out.append(r)
                continue
            out.append((rpos | cpos, rneg | cneg))
            p = rpos
            n = rneg
            while free_pos:
                bit = free_pos & (~free_pos + 1)
                free_pos ^= bit
                out.append((p, n | bit))
                p |= bit
            while free_neg:
                bit = free_neg & (~free_neg + 1)
                free_neg ^= bit
                out.append((p | bit, n))
                n |= bit
        regions = out
    return regions


def tight_rankings(bounds, final, int rank, long limit=-1):
    cdef Py_ssize_t k = len(bounds)
    cdef Py_ssize_t i
    cdef int c, v, need, missing
    if rank < 1 or rank % 2 == 0:
        return []
    cdef list out = []
    cdef int *caps = <int *> malloc((k + 1) * sizeof(int))
    cdef int *fin = <int *> malloc((k + 1) * sizeof(int))
    cdef int *after = <int *> malloc((k + 1) * sizeof(int))
    cdef int *cur = <int *> malloc((k + 1) * sizeof(int))
    cdef int *miss = <int *> malloc((k + 1) * sizeof(int))
    cdef int *counts = <int *> malloc((rank + 1) * sizeof(int))
    try:
        for i in range(k):
            fin[i] = 1 if final[i] else 0
            c = min(<int> bounds[i], rank)
            if fin[i] and c % 2:
                c -= 1
            if c < 0:
                return []
            caps[i] = c
        after[k] = 0
        for i in range(k - 1, -1, -1):
            after[i] = after[i + 1] + (0 if fin[i] else 1)
        need = (rank + 1) // 2
        if after[0] < need:
            return []
        for v in range(rank + 1):
            counts[v] = 0
        # explicit-stack depth-first enumeration; cur[i] == -1 means "not started"
        i = 0
        miss[0] = need
        cur[0] = -1
        while i >= 0:
            if i == k:
                if miss[k] <= 0:
                    out.append(tuple([cur[j] for j in range(k)]))
                    if limit >= 0 and len(out) > limit:
                        return out
                i -= 1
                continue
            v = cur[i]
            if v >= 0:
                # undo the previous value at this position
                counts[v] -= 1
                v += 2 if fin[i] else 1
            else:
                v = 0
            if v > caps[i] or miss[i] > after[i]:
                cur[i] = -1
                i -= 1
                continue
            cur[i] = v
            missing = miss[i] - (1 if (v & 1 and counts[v] == 0) else 0)
            counts[v] += 1
            i += 1
            if i <= k:
                miss[i] = missing
                if i < k:
                    cur[i] = -1
        return out
    finally:
        free(caps)
        free(fin)
        free(after)
        free(cur)
        free(miss)
        free(counts)


def scc_ids(adj):
    cdef Py_ssize_t n = len(adj)
    cdef Py_ssize_t total = 0
    cdef Py_ssize_t v, w, u, j
    for succ in adj:
        total += len(succ)
    cdef int *start = <int *> malloc((n + 1) * sizeof(int))
    cdef int *dst = <int *> malloc((total + 1) * sizeof(int))
    cdef int *index = <int *> malloc((n + 1) * sizeof(int))
    cdef int *low = <int *> malloc((n + 1) * sizeof(int))
    cdef char *on_stack = <char *> malloc((n + 1) * sizeof(char))
    cdef int *stack = <int *> malloc((n + 1) * sizeof(int))
    cdef int *work_v = <int *> malloc((n + 1) * sizeof(int))
    cdef int *work_i = <int *> malloc((n + 1) * sizeof(int))
    cdef int sp = 0, wp = 0, counter = 0, ncomp = 0
    comp = [-1] * n
    try:
        j = 0
        for v in range(n):
            start[v] = j
            for w in adj[v]:
                dst[j] = w
                j += 1
            index[v] = -1
            on_stack[v] = 0
        start[n] = j
        for root in range(n):
            if index[root] != -1:
                continue
            index[root] = counter
            low[root] = counter
            counter += 1
            stack[sp] = root
            sp += 1
            on_stack[root] = 1
            work_v[0] = root
            work_i[0] = start[root]
            wp = 1
            while wp:
                v = work_v[wp - 1]
                if work_i[wp - 1] < start[v + 1]:
                    w = dst[work_i[wp - 1]]
                    work_i[wp - 1] += 1
                    if index[w] == -1:
                        index[w] = counter
                        low[w] = counter
                        counter += 1
                        stack[sp] = w
                        sp += 1
                        on_stack[w] = 1
                        work_v[wp] = w
                        work_i[wp] = start[w]
                        wp += 1
                    elif on_stack[w] and index[w] < low[v]:
                        low[v] = index[w]
                    continue
                wp -= 1
                if wp:
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
        return comp, ncomp
    finally:
        free(start)
        free(dst)
        free(index)
        free(low)
        free(on_stack)
        free(stack)
        free(work_v)
        free(work_i)

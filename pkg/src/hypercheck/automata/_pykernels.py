"""Pure-Python kernels. ``_ckernels.pyx`` mirrors this module function by function."""

from __future__ import annotations


def partition_regions(cubes):
    """Split the full alphabet into disjoint cubes, each inside or outside every input cube.

    Cubes are ``(pos, neg)`` bitmask pairs. The result covers every letter
    exactly once (regions outside all cubes included).
    """
    regions = [(0, 0)]
    for cpos, cneg in cubes:
        out = []
        for rpos, rneg in regions:
            # region disjoint from the cube: keep whole
            if rpos & cneg or rneg & cpos:
                out.append((rpos, rneg))
                continue
            # literals of the cube the region does not already fix
            free_pos = cpos & ~rpos
            free_neg = cneg & ~rneg
            if not free_pos and not free_neg:
                out.append((rpos, rneg))
                continue
            out.append((rpos | cpos, rneg | cneg))
            # complement of the remaining literals, as disjoint cubes
            p, n = rpos, rneg
            while free_pos:
                bit = free_pos & -free_pos
                free_pos ^= bit
                out.append((p, n | bit))
                p |= bit
            while free_neg:
                bit = free_neg & -free_neg
                free_neg ^= bit
                out.append((p | bit, n))
                n |= bit
        regions = out
    return regions


def tight_rankings(bounds, final, rank, limit=-1):
    """All rank vectors g with g[i] <= bounds[i], g[i] even where final[i],
    max(g) == rank (odd) and every odd value below rank used.

    With ``limit >= 0`` the enumeration stops after ``limit + 1`` vectors, so
    callers can detect an oversized result without building all of it.
    """
    k = len(bounds)
    if rank < 1 or rank % 2 == 0:
        return []
    caps = []
    for b, f in zip(bounds, final):
        c = min(b, rank)
        if f and c % 2:
            c -= 1
        if c < 0:
            return []
        caps.append(c)
    need = (rank + 1) // 2
    # non-final positions from i onwards, to prune unreachable tightness
    nonfinal_after = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        nonfinal_after[i] = nonfinal_after[i + 1] + (0 if final[i] else 1)
    if nonfinal_after[0] < need:
        return []
    out = []
    cur = [0] * k
    counts = [0] * (rank + 1)

    def rec(i, missing):
        if missing > nonfinal_after[i] or (limit >= 0 and len(out) > limit):
            return
        if i == k:
            out.append(tuple(cur))
            return
        step = 2 if final[i] else 1
        for v in range(0, caps[i] + 1, step):
            cur[i] = v
            newly = 1 if (v & 1 and counts[v] == 0) else 0
            counts[v] += 1
            rec(i + 1, missing - newly)
            counts[v] -= 1

    rec(0, need)
    return out


def scc_ids(adj):
    """Tarjan's algorithm, iterative. Returns (component id per node, count).

    Components are numbered in reverse topological order (sinks first).
    """
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            succ = adj[v]
            if i < len(succ):
                work[-1] = (v, i + 1)
                w = succ[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp, ncomp

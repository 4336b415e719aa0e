"""Product constructions: existential projection, intersection, self-composition."""

from __future__ import annotations

from collections import deque
from itertools import product

from ..budget import checkpoint
from ..system import TransitionSystem
from .nba import DEFAULT_CAP, NBA, AutomatonError, SizeCapExceeded, build_nba, reduce, sort_props


def remap_mask(mask: int, table: list[int]) -> int:
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= 1 << table[i]
        mask >>= 1
        i += 1
    return out


def with_props(a: NBA, props) -> NBA:
    """Same automaton over a superset of propositions (canonically ordered)."""
    props = tuple(props)
    if props == a.props:
        return a
    where = {p: i for i, p in enumerate(props)}
    try:
        table = [where[p] for p in a.props]
    except KeyError as e:
        raise AutomatonError(f"proposition {e.args[0]} missing from target table") from None
    cache: dict[int, int] = {}

    def rm(m):
        r = cache.get(m)
        if r is None:
            r = cache[m] = remap_mask(m, table)
        return r

    edges = tuple(tuple((rm(p), rm(n), d) for p, n, d in out) for out in a.edges)
    return NBA(a.arity, props, a.initial, a.accepting, edges)


def align(a: NBA, b: NBA) -> tuple[NBA, NBA]:
    if a.arity != b.arity:
        raise AutomatonError(f"arity mismatch: {a.arity} vs {b.arity}")
    props = sort_props(a.props + b.props)
    return with_props(a, props), with_props(b, props)


def exists_step(a: NBA, t: TransitionSystem, cap: int = DEFAULT_CAP) -> NBA:
    """Project away the last trace index by guessing a trace of ``t``.

    States are pairs (system state, automaton state); an edge reads the
    label of the current system state at the projected index.
    """
    if a.arity < 1:
        raise AutomatonError("exists_step needs arity >= 1")
    n = a.arity - 1
    low_props = tuple(p for p in a.props if p[1] < n)
    hi_props = [p for p in a.props if p[1] == n]
    k = len(low_props)
    low_mask = (1 << k) - 1
    hi_label = []
    for s in range(t.num_states):
        m = 0
        for i, (ap, _) in enumerate(hi_props):
            if ap in t.labels[s]:
                m |= 1 << i
        hi_label.append(m)

    # per (system label mask, automaton state): surviving (pos, neg, dst)
    restricted: dict[tuple[int, int], list] = {}

    def edges_for(lm: int, q: int):
        key = (lm, q)
        r = restricted.get(key)
        if r is None:
            r = []
            for p, ng, d in a.edges[q]:
                ph, nh = p >> k, ng >> k
                if ph & ~lm or nh & lm:
                    continue
                r.append((p & low_mask, ng & low_mask, d))
            restricted[key] = r
        return r

    init = [(s, q) for s in sorted(t.initial) for q in sorted(a.initial)]
    seen = set(init)
    queue = deque(init)
    edges = []
    count = 0
    while queue:
        s, q = queue.popleft()
        count += 1
        if not count & 255:
            checkpoint()
        out = edges_for(hi_label[s], q)
        if not out:
            continue
        for s2 in t.succ[s]:
            for p, ng, d in out:
                nxt = (s2, d)
                edges.append(((s, q), (p, ng), nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > cap:
                        raise SizeCapExceeded(f"exists_step exceeded {cap} states")
                    queue.append(nxt)
    accepting = [x for x in seen if x[1] in a.accepting]
    return reduce(build_nba(n, low_props, init, accepting, edges))


def intersect(a: NBA, b: NBA, cap: int = DEFAULT_CAP) -> NBA:
    """Two-copy Büchi product; unsatisfiable conjunctions are dropped."""
    a, b = align(a, b)
    fa, fb = a.accepting, b.accepting
    init = [(p, q, 0) for p in sorted(a.initial) for q in sorted(b.initial)]
    seen = set(init)
    queue = deque(init)
    edges = []
    count = 0
    while queue:
        p, q, c = queue.popleft()
        count += 1
        if not count & 255:
            checkpoint()
        if c == 0:
            c2 = 1 if p in fa else 0
        else:
            c2 = 0 if q in fb else 1
        for p1, n1, d1 in a.edges[p]:
            for p2, n2, d2 in b.edges[q]:
                pos, neg = p1 | p2, n1 | n2
                if pos & neg:
                    continue
                nxt = (d1, d2, c2)
                edges.append(((p, q, c), (pos, neg), nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > cap:
                        raise SizeCapExceeded(f"intersection exceeded {cap} states")
                    queue.append(nxt)
    accepting = [x for x in seen if x[2] == 0 and x[0] in fa]
    return reduce(build_nba(a.arity, a.props, init, accepting, edges))


def union(a: NBA, b: NBA) -> NBA:
    """Disjoint union of two automata."""
    a, b = align(a, b)
    off = a.num_states
    edges = a.edges + tuple(tuple((p, n, d + off) for p, n, d in out) for out in b.edges)
    return NBA(
        a.arity,
        a.props,
        a.initial | frozenset(q + off for q in b.initial),
        a.accepting | frozenset(q + off for q in b.accepting),
        edges,
    )


def self_composition(t: TransitionSystem, n: int, cap: int = DEFAULT_CAP) -> NBA:
    """Automaton over (2^AP)^n accepting exactly the zips of n traces of ``t``.

    Labels move from states to outgoing edges; every state is accepting.
    """
    if n < 1:
        raise AutomatonError("self-composition needs n >= 1")
    props = sort_props((ap, i) for ap in t.ap for i in range(n))
    bit = {p: i for i, p in enumerate(props)}
    # per (index, system state): exact cube of its label
    label_cube = []
    for i in range(n):
        row = []
        for s in range(t.num_states):
            pos = neg = 0
            for ap in t.ap:
                b = 1 << bit[(ap, i)]
                if ap in t.labels[s]:
                    pos |= b
                else:
                    neg |= b
            row.append((pos, neg))
        label_cube.append(row)
    init = list(product(*[sorted(t.initial)] * n))
    seen = set(init)
    queue = deque(init)
    edges = []
    count = 0
    while queue:
        st = queue.popleft()
        count += 1
        if not count & 255:
            checkpoint()
        pos = neg = 0
        for i, s in enumerate(st):
            p, m = label_cube[i][s]
            pos |= p
            neg |= m
        for nxt in product(*[t.succ[s] for s in st]):
            edges.append((st, (pos, neg), nxt))
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    raise SizeCapExceeded(f"self-composition exceeded {cap} states")
                queue.append(nxt)
    return build_nba(n, props, init, seen, edges)

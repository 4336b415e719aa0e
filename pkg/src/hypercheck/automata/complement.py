"""Büchi complementation over symbolic alphabets.

Two constructions share one interface (``initial``/``accepting``/``successors``
over hashable macro-states), so they can be materialized here or explored
lazily by the inclusion engines:

* :class:`RankComplement` -- level rankings restricted to tight rankings.
  A deterministic subset phase guesses the point after which the odd
  ranking is tight and its maximal rank constant; from there, rankings cover
  their predecessors and an O-set breakpoint certifies that every path
  eventually settles on an odd rank. Ranks never exceed ``2(|Q|-|F|)``.
* :class:`BreakpointComplement` -- for weak automata (every SCC uniformly
  accepting or rejecting) the rank bound collapses and a subset/breakpoint
  pair suffices.
* :func:`parity_complement` -- Safra-tree determinization to a parity
  automaton, whose complement only shifts priorities, followed by a
  parity-to-Büchi conversion. This is the default for non-weak automata.

Letters are handled by partitioning the alphabet, per subset of states, into
regions on which every outgoing cube is constant.
"""

from __future__ import annotations

from collections import deque

from ..budget import checkpoint
from . import kernels
from .nba import DEFAULT_CAP, NBA, SizeCapExceeded, build_nba, is_weak, reduce, universal_nba

EMPTY_RANKING = ("R", (), (), ())
# rankings one macro-state may expand to before the rank construction gives up
MACRO_CAP = 50_000


class _Regions:
    def __init__(self, a: NBA):
        self.a = a
        self.cache: dict[tuple, list] = {}

    def groups(self, states: tuple[int, ...]):
        """Alphabet regions for ``states`` grouped by successor map.

        Returns ``[(succmap, [region cubes])]`` where ``succmap[i]`` is the
        sorted successor tuple of ``states[i]`` under any letter of the group.
        """
        hit = self.cache.get(states)
        if hit is not None:
            return hit
        edges = self.a.edges
        cubes = list(dict.fromkeys((p, n) for q in states for p, n, _ in edges[q]))
        regions = kernels.partition_regions(cubes) if cubes else [(0, 0)]
        grouped: dict[tuple, list] = {}
        for rp, rn in regions:
            succmap = tuple(
                tuple(sorted({d for p, n, d in edges[q] if not (rp & n) and not (rn & p)}))
                for q in states
            )
            grouped.setdefault(succmap, []).append((rp, rn))
        out = list(grouped.items())
        self.cache[states] = out
        return out


def _union(succmap) -> tuple[int, ...]:
    s: set[int] = set()
    for t in succmap:
        s.update(t)
    return tuple(sorted(s))


class BreakpointComplement:
    """Subset/breakpoint complement, valid for weak automata only."""

    name = "breakpoint"

    def __init__(self, a: NBA):
        self.a = a
        self.final = a.accepting
        self.regions = _Regions(a)

    def initial(self):
        s = tuple(sorted(self.a.initial))
        return [("B", s, ())]

    @staticmethod
    def accepting(m) -> bool:
        return not m[2]

    def successors(self, m):
        _, states, owe = m
        final = self.final
        out = []
        owe_set = set(owe)
        for succmap, cubes in self.regions.groups(states):
            nxt = _union(succmap)
            if owe:
                src: set[int] = set()
                for q, t in zip(states, succmap):
                    if q in owe_set:
                        src.update(t)
            else:
                src = set(nxt)
            owe2 = tuple(sorted(q for q in src if q in final))
            out.append((cubes, ("B", nxt, owe2)))
        return out


class RankComplement:
    """Tight level-ranking complement (see module docstring)."""

    name = "rank"

    def __init__(self, a: NBA, cap: int = DEFAULT_CAP, macro_cap: int = MACRO_CAP):
        self.a = a
        self.cap = cap
        # rankings allowed per macro-state and letter region
        self.macro_cap = min(cap, macro_cap)
        self.final = a.accepting
        self.max_rank = 2 * (a.num_states - len(a.accepting))
        self.regions = _Regions(a)

    def initial(self):
        s = tuple(sorted(self.a.initial))
        out = [("S", s)]
        out.extend(self._jumps(s))
        return out

    @staticmethod
    def accepting(m) -> bool:
        return m[0] == "R" and not m[3]

    def _jumps(self, states):
        """Phase-2 entry points over ``states``: every tight ranking, empty breakpoint."""
        if not states:
            return [EMPTY_RANKING]
        final = [q in self.final for q in states]
        nonfinal = len(states) - sum(final)
        top = min(2 * nonfinal - 1, self.max_rank - 1)
        out = []
        bounds = [self.max_rank] * len(states)
        for r in range(1, top + 1, 2):
            room = self.macro_cap - len(out)
            for g in kernels.tight_rankings(bounds, final, r, room):
                out.append(("R", states, g, ()))
            if len(out) > self.macro_cap:
                raise SizeCapExceeded(f"more than {self.macro_cap} rankings for one macro-state")
        return out

    def successors(self, m):
        if m[0] == "S":
            out = []
            for succmap, cubes in self.regions.groups(m[1]):
                nxt = _union(succmap)
                targets = [("S", nxt)] + self._jumps(nxt)
                out.append((cubes, targets))
            return [(cubes, t) for cubes, ts in out for t in ts]
        _, states, ranks, owe = m
        if not states:
            return [([(0, 0)], m)]
        rank = max(ranks)
        final = self.final
        owe_set = set(owe)
        out = []
        for succmap, cubes in self.regions.groups(states):
            nxt = _union(succmap)
            if not nxt:
                out.append((cubes, EMPTY_RANKING))
                continue
            bound = {}
            for r, t in zip(ranks, succmap):
                for d in t:
                    b = bound.get(d)
                    if b is None or r < b:
                        bound[d] = r
            bounds = [bound[q] for q in nxt]
            is_final = [q in final for q in nxt]
            if owe:
                src: set[int] = set()
                for q, t in zip(states, succmap):
                    if q in owe_set:
                        src.update(t)
            else:
                src = set(nxt)
            gs = kernels.tight_rankings(bounds, is_final, rank, self.macro_cap)
            if len(gs) > self.macro_cap:
                raise SizeCapExceeded(f"more than {self.macro_cap} rankings for one macro-state")
            for g in gs:
                owe2 = tuple(q for q, v in zip(nxt, g) if q in src and not v & 1)
                out.append((cubes, ("R", nxt, g, owe2)))
        return out

    # subsumption support for the antichain engine
    @staticmethod
    def family(m):
        """Macro-states comparable by :meth:`leq` share a family."""
        if m[0] == "S":
            return m
        return ("R", m[1], m[3], max(m[2]) if m[2] else -1)

    @staticmethod
    def leq(m1, m2) -> bool:
        """Rankings pointwise below within one family: successors of m1 are successors of m2."""
        if m1[0] == "S":
            return m1 == m2
        return all(x <= y for x, y in zip(m1[2], m2[2]))


class _Node:
    __slots__ = ("name", "label", "kids")

    def __init__(self, name, label, kids):
        self.name = name
        self.label = label
        self.kids = kids


def _thaw(t) -> _Node:
    return _Node(t[0], set(t[1]), [_thaw(c) for c in t[2]])


def _freeze(v: _Node, rename) -> tuple:
    return (rename[id(v)], tuple(sorted(v.label)), tuple(_freeze(c, rename) for c in v.kids))


def _preorder(v: _Node):
    out = []
    stack = [v]
    while stack:
        x = stack.pop()
        out.append(x)
        stack.extend(reversed(x.kids))
    return out


def _safra_step(tree, succ_of, final, neutral):
    """One Safra-tree transition. Returns ``(tree', priority)`` (min-even parity)."""
    root = _thaw(tree)
    existing = _preorder(root)
    for v in existing:
        fl = v.label & final
        if fl:
            v.kids.append(_Node(None, fl, []))
    for v in _preorder(root):
        nxt: set[int] = set()
        for q in v.label:
            nxt.update(succ_of[q])
        v.label = nxt

    def hmerge(v):
        seen: set[int] = set()
        for c in v.kids:
            c.label &= v.label
            c.label -= seen
            hmerge(c)
            seen |= c.label

    # iterative variants are unnecessary: trees have at most |Q| nodes
    hmerge(root)
    removed: list[int] = []

    def drop(v):
        for x in _preorder(v):
            if x.name is not None:
                removed.append(x.name)

    def prune(v):
        keep = []
        for c in v.kids:
            if c.label:
                keep.append(c)
                prune(c)
            else:
                drop(c)
        v.kids = keep

    if not root.label:
        return None, 1
    prune(root)
    marked: list[int] = []

    def vmerge(v):
        if not v.kids:
            return
        union: set[int] = set()
        for c in v.kids:
            union |= c.label
        if union == v.label:
            for c in v.kids:
                drop(c)
            v.kids = []
            if v.name is not None:
                marked.append(v.name)
            return
        for c in v.kids:
            vmerge(c)

    vmerge(root)
    prio = neutral
    if marked:
        prio = min(prio, 2 * min(marked))
    if removed:
        prio = min(prio, 2 * min(removed) - 1)
    nodes = _preorder(root)
    old = sorted((x for x in nodes if x.name is not None), key=lambda x: x.name)
    rename = {id(x): i + 1 for i, x in enumerate(old)}
    nxt_name = len(old) + 1
    for x in nodes:
        if x.name is None:
            rename[id(x)] = nxt_name
            nxt_name += 1
    return _freeze(root, rename), prio


def determinize(a: NBA, cap: int = DEFAULT_CAP):
    """Deterministic parity automaton for ``L(a)`` (accepting iff the least
    priority seen infinitely often is even).

    Returns ``(states, edges, neutral)``: state 0 is initial; ``edges[i]`` is a
    list of ``(cubes, dst, priority)``. A state ``None`` is the rejecting sink.
    """
    final = set(a.accepting)
    neutral = 2 * max(1, a.num_states) + 1
    regions = _Regions(a)
    start = (1, tuple(sorted(a.initial)), ()) if a.initial else None
    index = {start: 0}
    states = [start]
    edges: list[list] = []
    i = 0
    while i < len(states):
        if not i & 31:
            checkpoint()
        t = states[i]
        i += 1
        out = []
        if t is None:
            out.append(([(0, 0)], 0, neutral))
        else:
            for succmap, cubes in regions.groups(t[1]):
                succ_of = dict(zip(t[1], succmap))
                t2, prio = _safra_step(t, succ_of, final, neutral)
                j = index.get(t2)
                if j is None:
                    j = index[t2] = len(states)
                    if j >= cap:
                        raise SizeCapExceeded(f"determinization exceeded {cap} states")
                    states.append(t2)
                out.append((cubes, j, prio))
        # the sink's self-loop dst must point at itself
        if t is None:
            out = [(c, i - 1, p) for c, _, p in out]
        edges.append(out)
    return states, edges, neutral


def parity_complement(a: NBA, cap: int = DEFAULT_CAP) -> NBA:
    """Complement through determinization: the complement accepts exactly the
    words whose deterministic run sees an odd least priority infinitely often.

    The Büchi automaton runs the parity automaton and, for each odd k, may
    jump into a copy restricted to an SCC of the priority-≥k subgraph that
    contains a k-edge; visiting a k-edge there is accepting.
    """
    states, edges, _ = determinize(a, cap)
    m = len(states)
    odd = sorted({p for out in edges for _, _, p in out if p & 1})
    copies: dict[int, tuple[set[int], list]] = {}
    for k in odd:
        adj = [sorted({d for _, d, p in edges[u] if p >= k}) for u in range(m)]
        comp, _ = kernels.scc_ids(adj)
        good = set()
        for u in range(m):
            for _, d, p in edges[u]:
                if p == k and comp[d] == comp[u]:
                    good.add(comp[u])
        if good:
            members = {u for u in range(m) if comp[u] in good}
            copies[k] = (members, comp)
    nba_edges = []
    accepting = []
    total = m
    for u in range(m):
        for cubes, d, p in edges[u]:
            for c in cubes:
                nba_edges.append((("D", u), c, ("D", d)))
            for k, (members, comp) in copies.items():
                if d in members:
                    for c in cubes:
                        nba_edges.append((("D", u), c, ("C", d, k, False)))
                if u in members and comp[d] == comp[u] and p >= k:
                    for flag in (False, True):
                        for c in cubes:
                            nba_edges.append((("C", u, k, flag), c, ("C", d, k, p == k)))
    for k, (members, _) in copies.items():
        total += 2 * len(members)
        accepting.extend(("C", u, k, True) for u in members)
    if total > cap:
        raise SizeCapExceeded(f"parity-to-Büchi conversion exceeded {cap} states")
    init = [("D", 0)] + [("C", 0, k, False) for k, (mem, _) in copies.items() if 0 in mem]
    return build_nba(a.arity, a.props, init, accepting, nba_edges)


def complementer(a: NBA, method: str = "auto", cap: int = DEFAULT_CAP):
    if method == "auto":
        method = "breakpoint" if is_weak(a) else "rank"
    if method == "breakpoint":
        if not is_weak(a):
            raise ValueError("breakpoint complementation needs a weak automaton")
        return BreakpointComplement(a)
    if method == "rank":
        return RankComplement(a, cap)
    if method == "parity":
        raise ValueError("parity complementation is not available as a lazy complementer")
    raise ValueError(f"unknown complementation method {method!r}")


def complement(a: NBA, cap: int = DEFAULT_CAP, method: str = "auto") -> NBA:
    """Automaton for the complement language over the same propositions."""
    a = reduce(a)
    if not a.initial or not a.accepting:
        return universal_nba(a.arity, a.props)
    if method == "auto":
        method = "breakpoint" if is_weak(a) else "parity"
    if method == "parity":
        return reduce(parity_complement(a, cap))
    comp = complementer(a, method, cap)
    init = comp.initial()
    index = {m: i for i, m in enumerate(init)}
    queue = deque(init)
    edges = []
    count = 0
    while queue:
        m = queue.popleft()
        count += 1
        if not count & 63:
            checkpoint()
        src = index[m]
        for cubes, m2 in comp.successors(m):
            dst = index.get(m2)
            if dst is None:
                dst = index[m2] = len(index)
                if dst >= cap:
                    raise SizeCapExceeded(f"complement exceeded {cap} states")
                queue.append(m2)
            for c in cubes:
                edges.append((src, c, dst))
    accepting = [i for m, i in index.items() if comp.accepting(m)]
    return reduce(build_nba(a.arity, a.props, range(len(init)), accepting, edges))

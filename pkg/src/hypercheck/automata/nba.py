"""Büchi automata over the product alphabet (2^AP)^n with cube-labelled edges.

A proposition is a pair ``(ap, index)``; bit ``i`` of a cube refers to
``props[i]``. Props are kept sorted by ``(index, ap)`` so the propositions
of the highest trace index occupy the top bits. A cube is a ``(pos, neg)``
pair of disjoint bitmasks; a DNF guard is a collection of cubes, stored as
one edge per cube.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import kernels

Prop = tuple[str, int]
Cube = tuple[int, int]
Letter = tuple[frozenset, ...]
TOP: Cube = (0, 0)


class AutomatonError(ValueError):
    pass


class SizeCapExceeded(RuntimeError):
    """A construction grew past its configured state cap."""


DEFAULT_CAP = 10**6


def sort_props(props: Iterable[Prop]) -> tuple[Prop, ...]:
    return tuple(sorted(set(props), key=lambda p: (p[1], p[0])))


def cube_sat(c: Cube) -> bool:
    return not (c[0] & c[1])


def cube_and(a: Cube, b: Cube) -> Cube | None:
    p, n = a[0] | b[0], a[1] | b[1]
    if p & n:
        return None
    return (p, n)


def cube_holds(c: Cube, mask: int) -> bool:
    return not (c[0] & ~mask) and not (c[1] & mask)


def letter_mask(props: Sequence[Prop], letter: Letter) -> int:
    m = 0
    for i, (ap, idx) in enumerate(props):
        if ap in letter[idx]:
            m |= 1 << i
    return m


def cube_model(props: Sequence[Prop], cube: Cube, arity: int) -> Letter:
    """Minimal model: positive literals present, everything else absent."""
    sets: list[set] = [set() for _ in range(arity)]
    pos = cube[0]
    i = 0
    while pos:
        if pos & 1:
            ap, idx = props[i]
            sets[idx].add(ap)
        pos >>= 1
        i += 1
    return tuple(frozenset(s) for s in sets)


def cube_str(props: Sequence[Prop], c: Cube) -> str:
    lits = []
    for i, (ap, idx) in enumerate(props):
        if c[0] >> i & 1:
            lits.append(f"{ap}@{idx}")
        elif c[1] >> i & 1:
            lits.append(f"!{ap}@{idx}")
    return " & ".join(lits) if lits else "t"


@dataclass(frozen=True)
class LassoWord:
    """Ultimately periodic word ``stem . loop^omega`` over (2^AP)^arity."""

    arity: int
    stem: tuple[Letter, ...]
    loop: tuple[Letter, ...]

    def __post_init__(self):
        if not self.loop:
            raise ValueError("loop must be nonempty")
        for letter in self.stem + self.loop:
            if len(letter) != self.arity:
                raise ValueError("letter does not match arity")

    @classmethod
    def of(cls, stem, loop) -> "LassoWord":
        """Build from nested iterables of AP names; arity inferred from the loop."""
        stem = tuple(tuple(frozenset(s) for s in letter) for letter in stem)
        loop = tuple(tuple(frozenset(s) for s in letter) for letter in loop)
        return cls(len(loop[0]), stem, loop)

    def __len__(self) -> int:
        return len(self.stem) + len(self.loop)

    def letter(self, i: int) -> Letter:
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]

    def successor(self, i: int) -> int:
        """Next position index in the folded representation."""
        i += 1
        return i if i < len(self) else len(self.stem)

    def unrolled(self, stem_extra: int = 0, loop_copies: int = 1) -> "LassoWord":
        stem = self.stem + self.loop * stem_extra
        return LassoWord(self.arity, stem, self.loop * loop_copies)

    def track(self, i: int) -> "LassoWord":
        """Component trace ``i`` as an arity-1 word."""
        pick = lambda letters: tuple((l[i],) for l in letters)  # noqa: E731
        return LassoWord(1, pick(self.stem), pick(self.loop))

    def __str__(self) -> str:
        return format_lasso(self)


def zip_words(words: Sequence[LassoWord]) -> LassoWord:
    """Pointwise product of words, each of arity 1 or more, in order."""
    from math import lcm

    if not words:
        raise ValueError("need at least one word")
    stem_len = max(len(w.stem) for w in words)
    loop_len = lcm(*(len(w.loop) for w in words))
    stem = []
    loop = []
    for i in range(stem_len + loop_len):
        letter = tuple(x for w in words for x in w.letter(i))
        (stem if i < stem_len else loop).append(letter)
    return LassoWord(sum(w.arity for w in words), tuple(stem), tuple(loop))


def format_letter(letter: Letter) -> str:
    items = [f"{ap}@{i}" for i, s in enumerate(letter) for ap in sorted(s)]
    return "{" + ",".join(items) + "}"


def format_lasso(w: LassoWord) -> str:
    stem = " ".join(format_letter(l) for l in w.stem)
    loop = " ".join(format_letter(l) for l in w.loop)
    return f"STEM: {stem} LOOP: {loop}".replace("STEM:  LOOP", "STEM: LOOP")


def parse_lasso(text: str, arity: int | None = None) -> LassoWord:
    """Inverse of :func:`format_lasso`."""
    import re

    m = re.fullmatch(r"\s*STEM:(.*)LOOP:(.*)", text, re.S)
    if not m:
        raise ValueError(f"cannot parse lasso word {text!r}")
    parts = []
    max_idx = -1
    for chunk in m.groups():
        letters = []
        for body in re.findall(r"\{([^}]*)\}", chunk):
            items = []
            for item in filter(None, (x.strip() for x in body.split(","))):
                ap, _, idx = item.rpartition("@")
                items.append((ap, int(idx)))
                max_idx = max(max_idx, int(idx))
            letters.append(items)
        parts.append(letters)
    n = arity if arity is not None else max_idx + 1
    build = lambda letters: tuple(  # noqa: E731
        tuple(frozenset(ap for ap, i in items if i == k) for k in range(n)) for items in letters
    )
    return LassoWord(n, build(parts[0]), build(parts[1]))


@dataclass(frozen=True, eq=False)
class NBA:
    """Nondeterministic Büchi automaton; states are ``0..len(edges)-1``."""

    arity: int
    props: tuple[Prop, ...]
    initial: frozenset[int]
    accepting: frozenset[int]
    edges: tuple[tuple[tuple[int, int, int], ...], ...]  # per state: (pos, neg, dst)

    @property
    def num_states(self) -> int:
        return len(self.edges)

    @property
    def num_edges(self) -> int:
        return sum(len(e) for e in self.edges)

    def check_invariants(self) -> None:
        n = self.num_states
        for p, idx in self.props:
            if not 0 <= idx < self.arity:
                raise AutomatonError(f"proposition {p}@{idx} outside arity {self.arity}")
        if list(self.props) != list(sort_props(self.props)):
            raise AutomatonError("props not in canonical order")
        for q in self.initial | self.accepting:
            if not 0 <= q < n:
                raise AutomatonError(f"state {q} out of range")
        full = (1 << len(self.props)) - 1
        for q, out in enumerate(self.edges):
            for pos, neg, dst in out:
                if pos & neg:
                    raise AutomatonError(f"contradictory cube on edge {q} -> {dst}")
                if (pos | neg) & ~full:
                    raise AutomatonError(f"cube on edge {q} -> {dst} uses unknown bits")
                if not 0 <= dst < n:
                    raise AutomatonError(f"edge {q} -> {dst} out of range")

    def guards(self, q: int) -> dict[int, list[Cube]]:
        """DNF guard per successor of ``q``."""
        out: dict[int, list[Cube]] = {}
        for pos, neg, dst in self.edges[q]:
            out.setdefault(dst, []).append((pos, neg))
        return out

    def adjacency(self) -> list[list[int]]:
        return [sorted({d for _, _, d in out}) for out in self.edges]

    def __repr__(self) -> str:
        return (
            f"NBA(arity={self.arity}, states={self.num_states}, edges={self.num_edges}, "
            f"accepting={len(self.accepting)}, props={len(self.props)})"
        )


def empty_nba(arity: int, props: Iterable[Prop] = ()) -> NBA:
    return NBA(arity, sort_props(props), frozenset(), frozenset(), ())


def universal_nba(arity: int, props: Iterable[Prop] = ()) -> NBA:
    return NBA(arity, sort_props(props), frozenset({0}), frozenset({0}), (((0, 0, 0),),))


def build_nba(arity, props, initial, accepting, edges) -> NBA:
    """Build from an edge list ``[(src, cube, dst)]`` over arbitrary hashable states.

    Unsatisfiable cubes are dropped; states are renumbered in first-seen order.
    """
    index: dict = {}

    def idx(s):
        i = index.get(s)
        if i is None:
            i = index[s] = len(index)
            out.append([])
        return i

    out: list[list] = []
    for s in initial:
        idx(s)
    seen_edges = set()
    for src, (pos, neg), dst in edges:
        if pos & neg:
            continue
        a, b = idx(src), idx(dst)
        key = (a, pos, neg, b)
        if key in seen_edges:
            continue
        seen_edges.add(key)
        out[a].append((pos, neg, b))
    acc = frozenset(index[s] for s in accepting if s in index)
    return NBA(
        arity,
        tuple(props),
        frozenset(index[s] for s in initial),
        acc,
        tuple(tuple(e) for e in out),
    )


# ---------------------------------------------------------------------------
# Graph analysis


def reachable_states(a: NBA) -> list[int]:
    seen = set(a.initial)
    queue = deque(sorted(a.initial))
    order = []
    while queue:
        q = queue.popleft()
        order.append(q)
        for _, _, d in a.edges[q]:
            if d not in seen:
                seen.add(d)
                queue.append(d)
    return order


def accepting_cycle_states(adj: list[list[int]], accepting) -> set[int]:
    """States lying in an SCC that contains an accepting state and a cycle."""
    comp, ncomp = kernels.scc_ids(adj)
    size = [0] * ncomp
    for c in comp:
        size[c] += 1
    good = [False] * ncomp
    for q in accepting:
        c = comp[q]
        if size[c] > 1 or q in adj[q]:
            good[c] = True
    return {q for q in range(len(adj)) if good[comp[q]]}


def trim(a: NBA) -> NBA:
    """Keep states reachable from an initial state and co-reachable to an accepting cycle."""
    reach = reachable_states(a)
    if not reach:
        return empty_nba(a.arity, a.props)
    local = {q: i for i, q in enumerate(reach)}
    adj = [sorted({local[d] for _, _, d in a.edges[q]}) for q in reach]
    acc = [local[q] for q in reach if q in a.accepting]
    good = accepting_cycle_states(adj, acc)
    if not good:
        return empty_nba(a.arity, a.props)
    # backward reachability to the good SCCs
    rev: list[list[int]] = [[] for _ in reach]
    for i, out in enumerate(adj):
        for j in out:
            rev[j].append(i)
    live = set(good)
    stack = list(good)
    while stack:
        j = stack.pop()
        for i in rev[j]:
            if i not in live:
                live.add(i)
                stack.append(i)
    keep = [q for q in reach if local[q] in live]
    if len(keep) == a.num_states and len(keep) == len(reach):
        return a
    renum = {q: i for i, q in enumerate(keep)}
    edges = tuple(
        tuple((p, n, renum[d]) for p, n, d in a.edges[q] if d in renum) for q in keep
    )
    return NBA(
        a.arity,
        a.props,
        frozenset(renum[q] for q in a.initial if q in renum),
        frozenset(renum[q] for q in a.accepting if q in renum),
        edges,
    )


def is_empty_structure(a: NBA) -> bool:
    return not a.initial or not a.accepting


def scc_partition(a: NBA) -> tuple[list[int], list[bool]]:
    """Component id per state and whether each component is nontrivial."""
    adj = a.adjacency()
    comp, ncomp = kernels.scc_ids(adj)
    nontrivial = [False] * ncomp
    size = [0] * ncomp
    for c in comp:
        size[c] += 1
    for q in range(a.num_states):
        if size[comp[q]] > 1 or q in adj[q]:
            nontrivial[comp[q]] = True
    return comp, nontrivial


def is_weak(a: NBA) -> bool:
    """Every nontrivial SCC is entirely accepting or entirely rejecting."""
    comp, nontrivial = scc_partition(a)
    kind: dict[int, bool] = {}
    for q in range(a.num_states):
        c = comp[q]
        if not nontrivial[c]:
            continue
        acc = q in a.accepting
        if kind.setdefault(c, acc) != acc:
            return False
    return True


# ---------------------------------------------------------------------------
# Emptiness and membership


def _bfs_path(starts, targets, succ, allowed=None):
    """Shortest edge path from any start to any target; returns [(src, label, dst)]."""
    parent = {}
    queue = deque()
    for s in starts:
        if s not in parent:
            parent[s] = None
            queue.append(s)
    while queue:
        v = queue.popleft()
        if v in targets:
            target = v
            path = []
            while parent[v] is not None:
                u, lab = parent[v]
                path.append((u, lab, v))
                v = u
            return path[::-1], target
        for lab, w in succ(v):
            if allowed is not None and w not in allowed:
                continue
            if w not in parent:
                parent[w] = (v, lab)
                queue.append(w)
    return None


def _cycle_through(q, succ, allowed):
    """Shortest nonempty cycle from q back to q inside ``allowed``."""
    parent = {}
    queue = deque()
    first = list(succ(q))
    for lab, w in first:
        if w == q:
            return [(q, lab, q)]
    for lab, w in first:
        if w in allowed and w not in parent:
            parent[w] = (q, lab)
            queue.append(w)
    while queue:
        v = queue.popleft()
        for lab, w in succ(v):
            if w == q:
                path = [(v, lab, q)]
                while v != q:
                    u, l2 = parent[v]
                    path.append((u, l2, v))
                    v = u
                return path[::-1]
            if w in allowed and w not in parent:
                parent[w] = (v, lab)
                queue.append(w)
    return None


def find_lasso(initial, succ, accepting_in):
    """Accepting lasso in an explicit graph.

    ``succ(v)`` yields ``(label, w)``; ``accepting_in`` is the set of accepting
    states that lie on a cycle, grouped with their SCC as ``{state: scc_set}``.
    Returns ``(stem_path, loop_path)`` or None.
    """
    if not accepting_in:
        return None
    found = _bfs_path(initial, accepting_in, succ)
    if found is None:
        return None
    stem, q = found
    loop = _cycle_through(q, succ, accepting_in[q])
    assert loop is not None
    return stem, loop


@dataclass(frozen=True)
class EmptinessResult:
    empty: bool
    witness: LassoWord | None = None
    run: tuple | None = None  # (stem states, loop states) of the accepting run


def emptiness(a: NBA) -> EmptinessResult:
    """SCC-based emptiness check with lasso witness extraction."""
    reach = reachable_states(a)
    if not reach or not a.accepting:
        return EmptinessResult(True)
    local = {q: i for i, q in enumerate(reach)}
    adj = [sorted({local[d] for _, _, d in a.edges[q]}) for q in reach]
    comp, ncomp = kernels.scc_ids(adj)
    members: dict[int, set[int]] = {}
    for i, c in enumerate(comp):
        members.setdefault(c, set()).add(reach[i])
    accepting_in = {}
    for q in reach:
        if q not in a.accepting:
            continue
        c = comp[local[q]]
        if len(members[c]) > 1 or local[q] in adj[local[q]]:
            accepting_in[q] = members[c]
    if not accepting_in:
        return EmptinessResult(True)

    def succ(v):
        for p, n, d in a.edges[v]:
            yield (p, n), d

    stem, loop = find_lasso(a.initial, succ, accepting_in)
    model = lambda cube: cube_model(a.props, cube, a.arity)  # noqa: E731
    word = LassoWord(
        a.arity,
        tuple(model(c) for _, c, _ in stem),
        tuple(model(c) for _, c, _ in loop),
    )
    run = (tuple(s for s, _, _ in stem), tuple(s for s, _, _ in loop))
    return EmptinessResult(False, word, run)


def member(a: NBA, w: LassoWord) -> bool:
    """Does ``a`` accept ``stem . loop^omega``? Accepting-cycle search on a x positions."""
    if w.arity != a.arity:
        raise AutomatonError(f"word arity {w.arity} != automaton arity {a.arity}")
    masks = [letter_mask(a.props, w.letter(i)) for i in range(len(w))]
    nxt = [w.successor(i) for i in range(len(w))]
    index: dict[tuple[int, int], int] = {}
    adj: list[list[int]] = []
    nodes: list[tuple[int, int]] = []
    stack = []
    for q in a.initial:
        v = (q, 0)
        if v not in index:
            index[v] = len(nodes)
            nodes.append(v)
            adj.append([])
            stack.append(v)
    while stack:
        q, i = stack.pop()
        vi = index[(q, i)]
        m = masks[i]
        j = nxt[i]
        targets = set()
        for p, n, d in a.edges[q]:
            if not (p & ~m) and not (n & m):
                targets.add(d)
        for d in targets:
            v = (d, j)
            wi = index.get(v)
            if wi is None:
                wi = index[v] = len(nodes)
                nodes.append(v)
                adj.append([])
                stack.append(v)
            adj[vi].append(wi)
    acc = [k for k, (q, _) in enumerate(nodes) if q in a.accepting]
    return bool(accepting_cycle_states(adj, acc))


def quotient(a: NBA) -> NBA:
    """Merge states with identical acceptance and identical cube-labelled futures.

    Partition refinement for direct bisimulation; language preserving.
    """
    n = a.num_states
    if n <= 1:
        return a
    block = [1 if q in a.accepting else 0 for q in range(n)]
    nblocks = len(set(block))
    while True:
        sigs: dict[tuple, int] = {}
        new = [0] * n
        for q in range(n):
            sig = (block[q], frozenset((p, m, block[d]) for p, m, d in a.edges[q]))
            new[q] = sigs.setdefault(sig, len(sigs))
        if len(sigs) == nblocks:
            break
        block, nblocks = new, len(sigs)
    block = new
    if nblocks == n:
        return a
    rep: dict[int, int] = {}
    for q in range(n):
        rep.setdefault(block[q], q)
    order = sorted(rep, key=rep.get)
    renum = {b: i for i, b in enumerate(order)}
    edges = tuple(
        tuple(sorted({(p, m, renum[block[d]]) for p, m, d in a.edges[rep[b]]})) for b in order
    )
    return NBA(
        a.arity,
        a.props,
        frozenset(renum[block[q]] for q in a.initial),
        frozenset(renum[block[q]] for q in a.accepting),
        edges,
    )


def saturate(a: NBA) -> NBA:
    """Make every SCC accepting in which each cycle already visits an accepting state.

    Runs that stay in such an SCC are accepting either way, so the language
    is unchanged, and automata with weak languages often become weak.
    """
    if not a.accepting:
        return a
    comp, nontrivial = scc_partition(a)
    members: dict[int, list[int]] = {}
    for q in range(a.num_states):
        members.setdefault(comp[q], []).append(q)
    extra = set()
    for c, qs in members.items():
        if not nontrivial[c] or not any(q in a.accepting for q in qs):
            continue
        rest = [q for q in qs if q not in a.accepting]
        if not rest:
            continue
        local = {q: i for i, q in enumerate(rest)}
        adj = [sorted({local[d] for _, _, d in a.edges[q] if d in local}) for q in rest]
        sub, nsub = kernels.scc_ids(adj)
        size = [0] * nsub
        for x in sub:
            size[x] += 1
        if any(size[sub[i]] > 1 or i in adj[i] for i in range(len(rest))):
            continue
        extra.update(rest)
    if not extra:
        return a
    return NBA(a.arity, a.props, a.initial, a.accepting | extra, a.edges)


def reduce(a: NBA) -> NBA:
    """Hygiene applied after every construction: trim, saturate acceptance, quotient."""
    return quotient(saturate(trim(a)))

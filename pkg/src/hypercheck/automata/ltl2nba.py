"""Tableau translation from quantifier-free LTL bodies to Büchi automata.

States are sets of NNF obligations. Expanding a state yields options
``(cube, next obligations, postponed untils)``; an until obligation that is
postponed forever makes the run rejecting. The resulting generalized Büchi
condition (one set per until) is degeneralized with a counter.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .. import formula as F
from .nba import NBA, build_nba, reduce, sort_props

_TRUE, _FALSE, _LIT, _AND, _OR, _NEXT, _UNTIL, _RELEASE = range(8)


class _Closure:
    """Interned NNF subformulas: id -> (kind, a, b)."""

    def __init__(self, bit_of: dict[tuple[str, str], int]):
        self.bit_of = bit_of
        self.nodes: list[tuple] = []
        self.ids: dict[tuple, int] = {}
        self.untils: list[int] = []

    def intern(self, f: F.Ltl) -> int:
        if isinstance(f, F.Const):
            key = (_TRUE if f.value else _FALSE, 0, 0)
        elif isinstance(f, F.Atom):
            key = (_LIT, 1 << self.bit_of[(f.prop, f.var)], True)
        elif isinstance(f, F.Not):
            assert isinstance(f.arg, F.Atom), "body must be in NNF"
            key = (_LIT, 1 << self.bit_of[(f.arg.prop, f.arg.var)], False)
        elif isinstance(f, F.And):
            key = (_AND, self.intern(f.left), self.intern(f.right))
        elif isinstance(f, F.Or):
            key = (_OR, self.intern(f.left), self.intern(f.right))
        elif isinstance(f, F.Next):
            key = (_NEXT, self.intern(f.arg), 0)
        elif isinstance(f, F.Until):
            key = (_UNTIL, self.intern(f.left), self.intern(f.right))
        elif isinstance(f, F.Release):
            key = (_RELEASE, self.intern(f.left), self.intern(f.right))
        else:
            raise TypeError(f"unexpected node in NNF body: {f!r}")
        i = self.ids.get(key)
        if i is None:
            i = self.ids[key] = len(self.nodes)
            self.nodes.append(key)
            if key[0] == _UNTIL:
                self.untils.append(i)
        return i


def _expand(cl: _Closure, state: frozenset[int]):
    """Options (pos, neg, next_set, postponed_set) of a tableau state."""
    nodes = cl.nodes
    out: list[tuple[int, int, frozenset, frozenset]] = []

    def rec(todo: tuple, done: frozenset, pos: int, neg: int, nxt: frozenset, post: frozenset):
        while todo:
            f, todo = todo[0], todo[1:]
            if f in done:
                continue
            done = done | {f}
            kind, a, b = nodes[f]
            if kind == _TRUE:
                continue
            if kind == _FALSE:
                return
            if kind == _LIT:
                if b:
                    pos |= a
                else:
                    neg |= a
                if pos & neg:
                    return
            elif kind == _AND:
                todo = (a, b) + todo
            elif kind == _NEXT:
                nxt = nxt | {a}
            elif kind == _OR:
                rec((a,) + todo, done, pos, neg, nxt, post)
                rec((b,) + todo, done, pos, neg, nxt, post)
                return
            elif kind == _UNTIL:
                rec((b,) + todo, done, pos, neg, nxt, post)
                rec((a,) + todo, done, pos, neg, nxt | {f}, post | {f})
                return
            elif kind == _RELEASE:
                rec((a, b) + todo, done, pos, neg, nxt, post)
                rec((b,) + todo, done, pos, neg, nxt | {f}, post)
                return
        out.append((pos, neg, nxt, post))

    rec(tuple(sorted(state)), frozenset(), 0, 0, frozenset(), frozenset())
    return _prune_dominated(out)


def _prune_dominated(options):
    """Drop options implied by another one with weaker letter, fewer obligations and postponements."""
    options = list(dict.fromkeys(options))
    keep = []
    for i, (p, n, nx, po) in enumerate(options):
        dominated = False
        for j, (p2, n2, nx2, po2) in enumerate(options):
            if i == j:
                continue
            if p2 & ~p or n2 & ~n or not nx2 <= nx or not po2 <= po:
                continue
            dominated = True
            break
        if not dominated:
            keep.append((p, n, nx, po))
    return keep


def ltl_to_nba(body: F.Ltl, var_order: Sequence[str]) -> NBA:
    """Büchi automaton over (2^AP)^len(var_order) accepting exactly the zipped models of ``body``."""
    body = F.to_nnf(body)
    index = {v: i for i, v in enumerate(var_order)}
    missing = F.free_vars(body) - set(index)
    if missing:
        raise F.FormulaError(f"unbound trace variable {sorted(missing)[0]!r}")
    props = sort_props((ap, index[v]) for ap, v in F.atoms(body))
    bit = {p: i for i, p in enumerate(props)}
    cl = _Closure({(ap, v): bit[(ap, index[v])] for ap, v in F.atoms(body)})
    root = cl.intern(body)
    untils = cl.untils
    m = len(untils)
    expansions: dict[frozenset, list] = {}

    def advance(j: int, post: frozenset) -> int:
        j = 0 if j == m else j
        while j < m and untils[j] not in post:
            j += 1
        return j

    init = (frozenset({root}), 0)
    seen = {init}
    queue = deque([init])
    edges = []
    while queue:
        st, j = queue.popleft()
        opts = expansions.get(st)
        if opts is None:
            opts = expansions[st] = _expand(cl, st)
        for pos, neg, nxt, post in opts:
            succ = (nxt, advance(j, post))
            edges.append(((st, j), (pos, neg), succ))
            if succ not in seen:
                seen.add(succ)
                queue.append(succ)
    accepting = [s for s in seen if s[1] == m]
    return reduce(build_nba(len(var_order), props, [init], accepting, edges))

"""Brute-force references: nested-DFS emptiness over explicit letters, bounded lasso search."""

from __future__ import annotations

from itertools import product

from .. import formula as F
from ..automata.nba import NBA, LassoWord
from ..system import TransitionSystem
from .lasso_eval import LassoAssignment, eval_body


def _explicit_succ(a: NBA):
    """Successor lists over all explicit letters (the symbolic guards expanded)."""
    k = len(a.props)
    succ = [set() for _ in range(a.num_states)]
    for q in range(a.num_states):
        for pos, neg, d in a.edges[q]:
            for mask in range(1 << k):
                if mask & pos == pos and not mask & neg:
                    succ[q].add(d)
                    break
    return succ


def nested_dfs_nonempty(a: NBA) -> bool:
    """Textbook nested depth-first search for a reachable accepting cycle."""
    succ = _explicit_succ(a)
    outer: set[int] = set()
    inner: set[int] = set()

    def cycle_back(seed):
        stack = [seed]
        while stack:
            q = stack.pop()
            for d in succ[q]:
                if d == seed:
                    return True
                if d not in inner:
                    inner.add(d)
                    stack.append(d)
        return False

    def dfs(root):
        # iterative postorder: the inner search starts when a state is finished
        stack = [(root, iter(sorted(succ[root])))]
        outer.add(root)
        while stack:
            q, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                if q in a.accepting and cycle_back(q):
                    return True
                continue
            if nxt not in outer:
                outer.add(nxt)
                stack.append((nxt, iter(sorted(succ[nxt]))))
        return False

    return any(q not in outer and dfs(q) for q in sorted(a.initial))


def system_lassos(t: TransitionSystem, max_len: int):
    """Every trace ``L(s_0..s_{j-1}) (L(s_j..s_{k-1}))^ω`` of a state lasso with k <= max_len."""
    seen = set()
    paths = [(s,) for s in sorted(t.initial)]
    while paths:
        grown = []
        for path in paths:
            last = path[-1]
            for d in t.succ[last]:
                for j, s in enumerate(path):
                    if s == d:
                        stem = tuple((t.labels[x],) for x in path[:j])
                        loop = tuple((t.labels[x],) for x in path[j:])
                        w = LassoWord(1, stem, loop)
                        if w not in seen:
                            seen.add(w)
                            yield w
                if len(path) < max_len:
                    grown.append(path + (d,))
        paths = grown


def exists_bounded(t: TransitionSystem, f: F.HyperFormula, max_len: int) -> bool:
    """Search for an assignment of bounded system lassos satisfying an ∃-only formula."""
    if any(q != F.EXISTS for q, _ in f.prefix):
        raise ValueError("bounded search handles existential prefixes only")
    if len(f.prefix) == 1:
        var = f.variables[0]
        return any(eval_body(f.body, LassoAssignment({var: w})) for w in system_lassos(t, max_len))
    words = list(system_lassos(t, max_len))
    for combo in product(words, repeat=len(f.prefix)):
        if eval_body(f.body, LassoAssignment(dict(zip(f.variables, combo)))):
            return True
    return False

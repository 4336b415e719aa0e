"""Direct evaluation of LTL bodies on ultimately periodic trace assignments."""

from __future__ import annotations

from typing import Mapping

from .. import formula as F
from ..automata.nba import LassoWord, zip_words


class LassoAssignment:
    """Trace variables mapped to arity-1 lasso words, normalized to one shape."""

    def __init__(self, traces: Mapping[str, LassoWord]):
        self.vars = tuple(traces)
        words = [traces[v] for v in self.vars]
        for w in words:
            if w.arity != 1:
                raise ValueError("trace assignment needs arity-1 words")
        if words:
            self.word = zip_words(words)
        else:
            self.word = LassoWord(0, (), ((),))
        self.index = {v: i for i, v in enumerate(self.vars)}

    @classmethod
    def from_zip(cls, var_order, word: LassoWord) -> "LassoAssignment":
        return cls({v: word.track(i) for i, v in enumerate(var_order)})

    def trace(self, var: str) -> LassoWord:
        return self.word.track(self.index[var])

    @property
    def length(self) -> int:
        return len(self.word)


def _vector(f: F.Ltl, asg: LassoAssignment, memo: dict) -> list[bool]:
    key = id(f)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    w = asg.word
    n = len(w)
    nxt = [w.successor(i) for i in range(n)]
    if isinstance(f, F.Const):
        res = [f.value] * n
    elif isinstance(f, F.Atom):
        if f.var not in asg.index:
            raise F.FormulaError(f"unbound trace variable {f.var!r}")
        k = asg.index[f.var]
        res = [f.prop in w.letter(i)[k] for i in range(n)]
    elif isinstance(f, F.Not):
        res = [not x for x in _vector(f.arg, asg, memo)]
    elif isinstance(f, F.Next):
        a = _vector(f.arg, asg, memo)
        res = [a[nxt[i]] for i in range(n)]
    elif isinstance(f, (F.And, F.Or, F.Implies, F.Iff)):
        a = _vector(f.left, asg, memo)
        b = _vector(f.right, asg, memo)
        if isinstance(f, F.And):
            res = [x and y for x, y in zip(a, b)]
        elif isinstance(f, F.Or):
            res = [x or y for x, y in zip(a, b)]
        elif isinstance(f, F.Implies):
            res = [(not x) or y for x, y in zip(a, b)]
        else:
            res = [x == y for x, y in zip(a, b)]
    elif isinstance(f, (F.Until, F.Eventually)):
        if isinstance(f, F.Until):
            a, b = _vector(f.left, asg, memo), _vector(f.right, asg, memo)
        else:
            a, b = [True] * n, _vector(f.arg, asg, memo)
        res = _lfp(a, b, nxt)
    elif isinstance(f, (F.Release, F.Globally)):
        if isinstance(f, F.Release):
            a, b = _vector(f.left, asg, memo), _vector(f.right, asg, memo)
        else:
            a, b = [False] * n, _vector(f.arg, asg, memo)
        res = _gfp(a, b, nxt)
    elif isinstance(f, F.WeakUntil):
        a, b = _vector(f.left, asg, memo), _vector(f.right, asg, memo)
        until = _lfp(a, b, nxt)
        always = _gfp([False] * n, a, nxt)
        res = [x or y for x, y in zip(until, always)]
    else:
        raise TypeError(f"not an LTL node: {f!r}")
    memo[key] = (f, res)
    return res


def _lfp(a, b, nxt):
    """Least solution of x[i] = b[i] or (a[i] and x[next(i)])."""
    n = len(a)
    x = [False] * n
    changed = True
    while changed:
        changed = False
        for i in range(n - 1, -1, -1):
            if not x[i] and (b[i] or (a[i] and x[nxt[i]])):
                x[i] = True
                changed = True
    return x


def _gfp(a, b, nxt):
    """Greatest solution of x[i] = b[i] and (a[i] or x[next(i)])."""
    n = len(a)
    x = [True] * n
    changed = True
    while changed:
        changed = False
        for i in range(n - 1, -1, -1):
            if x[i] and not (b[i] and (a[i] or x[nxt[i]])):
                x[i] = False
                changed = True
    return x


def eval_body(body: F.Ltl, asg: LassoAssignment, i: int = 0) -> bool:
    """Truth of ``body`` at position ``i`` of the assignment's ω-words."""
    w = asg.word
    if i >= len(w):
        i = len(w.stem) + (i - len(w.stem)) % len(w.loop)
    return _vector(body, asg, {})[i]


def eval_zip(body: F.Ltl, var_order, word: LassoWord) -> bool:
    """Truth at position 0 with trace ``k`` of ``word`` bound to ``var_order[k]``."""
    return eval_body(body, LassoAssignment.from_zip(var_order, word))

"""Brute-force reference decision procedure over explicit alphabets.

Nothing here touches the symbolic automata package. Letters are integers
(one bit per proposition/trace pair), transition tables are indexed by
letter, and the LTL translation, projection, complementation and emptiness
check are all separate implementations:

* LTL goes to a very weak alternating automaton whose states are the
  subformulas of the body in negation normal form, then to a Büchi
  automaton by the subset/breakpoint construction.
* Complementation goes through Safra trees with parity acceptance. A
  tight level-ranking complement is kept alongside and the test suite
  checks the two against each other on small automata.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .. import formula as F
from ..system import TransitionSystem

MAX_STATES = 8
MAX_QUANTIFIERS = 3
MAX_BODY = 10
MAX_LETTER_BITS = 12
MAX_AUTOMATON = 200_000


class OracleBoundsError(ValueError):
    pass


class OracleLimitError(RuntimeError):
    pass


@dataclass
class Explicit:
    """Explicit-alphabet Büchi automaton: ``delta[q][letter]`` is a tuple of states."""

    nletters: int
    initial: tuple[int, ...]
    accepting: frozenset[int]
    delta: list[list[tuple[int, ...]]]

    @property
    def size(self) -> int:
        return len(self.delta)


def _letter_classes(a: Explicit):
    """Letters grouped by identical columns of the transition table."""
    groups: dict[tuple, list[int]] = {}
    for letter in range(a.nletters):
        groups.setdefault(tuple(row[letter] for row in a.delta), []).append(letter)
    return list(groups.values())


def _explore(nletters, init_keys, step, is_acc, classes=None) -> Explicit:
    index: dict = {}
    order: list = []

    def intern(k):
        i = index.get(k)
        if i is None:
            i = index[k] = len(order)
            order.append(k)
            if i >= MAX_AUTOMATON:
                raise OracleLimitError("reference automaton too large")
        return i

    initial = tuple(sorted({intern(k) for k in init_keys}))
    delta = []
    i = 0
    if classes is None:
        classes = [[letter] for letter in range(nletters)]
    while i < len(order):
        key = order[i]
        row = [()] * nletters
        for cls in classes:
            dst = tuple(sorted({intern(k) for k in step(key, cls[0])}))
            for letter in cls:
                row[letter] = dst
        delta.append(row)
        i += 1
    acc = frozenset(i for i, k in enumerate(order) if is_acc(k))
    return Explicit(nletters, initial, acc, delta)


# ---------------------------------------------------------------------------
# LTL in negation normal form, kept as plain tuples


def _nnf(f: F.Ltl, neg: bool = False):
    if isinstance(f, F.Const):
        return ("const", f.value != neg)
    if isinstance(f, F.Atom):
        return ("lit", f.prop, f.var, not neg)
    if isinstance(f, F.Not):
        return _nnf(f.arg, not neg)
    if isinstance(f, F.Next):
        return ("X", _nnf(f.arg, neg))
    if isinstance(f, F.Eventually):
        body = _nnf(f.arg, neg)
        return ("R", ("const", False), body) if neg else ("U", ("const", True), body)
    if isinstance(f, F.Globally):
        body = _nnf(f.arg, neg)
        return ("U", ("const", True), body) if neg else ("R", ("const", False), body)
    if isinstance(f, F.And):
        return ("or" if neg else "and", _nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, F.Or):
        return ("and" if neg else "or", _nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, F.Implies):
        return _nnf(F.Or(F.Not(f.left), f.right), neg)
    if isinstance(f, F.Iff):
        return _nnf(F.And(F.Implies(f.left, f.right), F.Implies(f.right, f.left)), neg)
    if isinstance(f, F.Until):
        op = "R" if neg else "U"
        return (op, _nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, F.Release):
        op = "U" if neg else "R"
        return (op, _nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, F.WeakUntil):
        # a W b  ==  (a U b) | G a
        return _nnf(F.Or(F.Until(f.left, f.right), F.Globally(f.left)), neg)
    raise TypeError(f"unexpected node {f!r}")


def _minimal(sets):
    sets = sorted(set(sets), key=len)
    out = []
    for s in sets:
        if not any(o <= s for o in out):
            out.append(s)
    return out


class _Vwaa:
    """Alternating automaton over subformulas; ``trans(state, letter)`` is a DNF
    (list of frozensets of successor subformulas)."""

    def __init__(self, bit_of):
        self.bit_of = bit_of
        self.memo: dict = {}

    def trans(self, g, letter):
        key = (g, letter)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        kind = g[0]
        if kind == "const":
            out = [frozenset()] if g[1] else []
        elif kind == "lit":
            _, ap, var, pos = g
            holds = bool(letter >> self.bit_of[(ap, var)] & 1)
            out = [frozenset()] if holds == pos else []
        elif kind == "and":
            out = _minimal(a | b for a in self.trans(g[1], letter) for b in self.trans(g[2], letter))
        elif kind == "or":
            out = _minimal(self.trans(g[1], letter) + self.trans(g[2], letter))
        elif kind == "X":
            out = [frozenset([g[1]])]
        elif kind == "U":
            now = self.trans(g[2], letter)
            later = [s | {g} for s in self.trans(g[1], letter)]
            out = _minimal(now + later)
        elif kind == "R":
            both = [a | b for a in self.trans(g[1], letter) for b in self.trans(g[2], letter)]
            later = [s | {g} for s in self.trans(g[2], letter)]
            out = _minimal(both + later)
        else:
            raise TypeError(kind)
        self.memo[key] = out
        return out


def ltl_explicit(body: F.Ltl, var_order, aps) -> Explicit:
    """Büchi automaton over letters ``sum(bit(ap, var))`` for the body."""
    bit_of = {}
    for i, v in enumerate(var_order):
        for j, ap in enumerate(aps):
            bit_of[(ap, v)] = i * len(aps) + j
    nletters = 1 << (len(var_order) * len(aps))
    vw = _Vwaa(bit_of)
    root = _nnf(body)

    def rejecting(g):
        return g[0] == "U"

    def step(key, letter):
        states, owe = key
        per_state = [vw.trans(g, letter) for g in states]
        for choice in product(*per_state):
            nxt = frozenset().union(*choice) if choice else frozenset()
            if owe:
                src = frozenset().union(*(c for g, c in zip(states, choice) if g in owe))
            else:
                src = nxt
            owe2 = frozenset(g for g in src if rejecting(g))
            yield (nxt, owe2)

    start = (frozenset([root]), frozenset())
    return _explore(nletters, [start], step, lambda k: not k[1])


# ---------------------------------------------------------------------------
# Operations


def project_last(a: Explicit, t: TransitionSystem, aps, arity: int) -> Explicit:
    """Existentially quantify the last trace over the traces of ``t``."""
    width = len(aps)
    shift = (arity - 1) * width
    label = []
    for s in range(t.num_states):
        m = 0
        for j, ap in enumerate(aps):
            if ap in t.labels[s]:
                m |= 1 << j
        label.append(m << shift)
    nletters = 1 << shift

    def step(key, letter):
        s, q = key
        full = letter | label[s]
        for q2 in a.delta[q][full]:
            for s2 in t.succ[s]:
                yield (s2, q2)

    groups: dict[tuple, list[int]] = {}
    for letter in range(nletters):
        sig = tuple(row[letter | lab] for row in a.delta for lab in set(label))
        groups.setdefault(sig, []).append(letter)
    init = [(s, q) for s in t.initial for q in a.initial]
    return _explore(nletters, init, step, lambda k: k[1] in a.accepting, list(groups.values()))


def _tight(bounds, finals, rank):
    """Rankings with values below the bounds, even on final states, maximum
    ``rank`` (odd) and every odd value below it used."""
    n = len(bounds)
    spare = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        spare[i] = spare[i + 1] + (0 if finals[i] else 1)
    need = (rank + 1) // 2
    out = []
    cur = [0] * n
    used = [0] * (rank + 1)

    def rec(i, missing):
        if missing > spare[i]:
            return
        if i == n:
            out.append(tuple(cur))
            return
        for r in range(min(bounds[i], rank) + 1):
            if finals[i] and r % 2:
                continue
            fresh = r % 2 == 1 and used[r] == 0
            used[r] += 1
            cur[i] = r
            rec(i + 1, missing - fresh)
            used[r] -= 1

    rec(0, need)
    return out


def complement_explicit(a: Explicit) -> Explicit:
    """Tight level-ranking complement.

    Phase one tracks the subset of reachable states; at any point it may
    guess a tight ranking, after which the maximal rank stays fixed, ranks
    never increase along edges, and the O-set checks that every path keeps
    reaching odd ranks.
    """
    # the canonical rank of a run-DAG vertex depends only on its descendants,
    # so it is at most twice the number of non-final states reachable from it
    succ = _successors(a)
    cap = []
    for q in range(a.size):
        seen = {q}
        stack = [q]
        while stack:
            x = stack.pop()
            for d in succ[x]:
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        cap.append(2 * len(seen - a.accepting))

    # the subset component is deterministic, so a run can postpone its jump
    # until the subset has entered the SCC of the subset graph it stays in
    classes = _letter_classes(a)
    recurrent = _recurrent_subsets(a, classes)

    def jumps(dom):
        if dom not in recurrent:
            return []
        if not dom:
            return [("R", dom, (), ())]
        finals = [q in a.accepting for q in dom]
        bounds = [cap[q] for q in dom]
        top = max(bounds)
        nonfinal = len(dom) - sum(finals)
        out = []
        for r in range(1, min(2 * nonfinal - 1, top - 1) + 1, 2):
            out.extend(("R", dom, g, ()) for g in _tight(bounds, finals, r))
        return out

    def step(key, letter):
        if key[0] == "S":
            nxt = tuple(sorted({d for q in key[1] for d in a.delta[q][letter]}))
            yield ("S", nxt)
            yield from jumps(nxt)
            return
        _, dom, g, owe = key
        if not dom:
            yield key
            return
        rank = dict(zip(dom, g))
        bound: dict[int, int] = {}
        for q in dom:
            for d in a.delta[q][letter]:
                bound[d] = min(bound.get(d, rank[q]), rank[q])
        nxt = tuple(sorted(bound))
        if not nxt:
            yield ("R", (), (), ())
            return
        src = {d for q in owe for d in a.delta[q][letter]} if owe else set(nxt)
        finals = [q in a.accepting for q in nxt]
        for g2 in _tight([min(bound[q], cap[q]) for q in nxt], finals, max(g)):
            owe2 = tuple(q for q, r in zip(nxt, g2) if q in src and r % 2 == 0)
            yield ("R", nxt, g2, owe2)

    start = tuple(sorted(a.initial))
    init = [("S", start)] + jumps(start)
    accept = lambda k: k[0] == "R" and not k[3]  # noqa: E731
    return _explore(a.nletters, init, step, accept, classes)


def _recurrent_subsets(a: Explicit, classes) -> set[tuple]:
    """Subsets lying on a cycle of the (deterministic) subset graph."""
    start = tuple(sorted(a.initial))
    succ: dict[tuple, set[tuple]] = {}
    stack = [start]
    while stack:
        x = stack.pop()
        if x in succ:
            continue
        out = set()
        for cls in classes:
            out.add(tuple(sorted({d for q in x for d in a.delta[q][cls[0]]})))
        succ[x] = out
        stack.extend(y for y in out if y not in succ)
    # Tarjan, iterative
    index: dict = {}
    low: dict = {}
    on: set = set()
    st: list = []
    result: set[tuple] = set()
    for root in succ:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = len(index)
        st.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = len(index)
                    st.append(w)
                    on.add(w)
                    work.append((w, iter(succ[w])))
                    pushed = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if pushed:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = st.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                if len(comp) > 1 or v in succ[v]:
                    result.update(comp)
    return result


def _safra_successor(tree, letter, a: Explicit, neutral):
    """Safra-tree step on one explicit letter.

    ``tree`` is a preorder tuple of ``(name, depth, label)``. Returns the next
    tree and the priority of the step (least priority seen infinitely often
    even = accepting).
    """
    # rebuild nested nodes: [name, label, children]
    nodes = [[n, set(lab), []] for n, _, lab in tree]
    parents: list[int] = []
    for i, (_, depth, _) in enumerate(tree):
        del parents[depth:]
        if parents:
            nodes[parents[-1]][2].append(nodes[i])
        parents.append(i)
    root = nodes[0]

    def walk(v):
        yield v
        for c in v[2]:
            yield from walk(c)

    for v in list(walk(root)):
        spawn = v[1] & a.accepting
        if spawn:
            v[2].append([None, set(spawn), []])
    for v in walk(root):
        v[1] = {d for q in v[1] for d in a.delta[q][letter]}
    claimed: set[int] = set()

    def left_merge(v):
        v[1] -= claimed
        for c in v[2]:
            c[1] &= v[1]
            left_merge(c)
        claimed.update(v[1])

    left_merge(root)
    if not root[1]:
        return None, 1
    removed: list[int] = []
    marked: list[int] = []

    def gone(v):
        removed.extend(x[0] for x in walk(v) if x[0] is not None)

    def clean(v):
        kept = []
        for c in v[2]:
            if c[1]:
                clean(c)
                kept.append(c)
            else:
                gone(c)
        v[2] = kept
        if kept and set().union(*(c[1] for c in kept)) == v[1]:
            for c in kept:
                gone(c)
            v[2] = []
            if v[0] is not None:
                marked.append(v[0])

    clean(root)
    prio = neutral
    if marked:
        prio = min(prio, 2 * min(marked))
    if removed:
        prio = min(prio, 2 * min(removed) - 1)
    order = list(walk(root))
    old = sorted(v[0] for v in order if v[0] is not None)
    rename = {n: i + 1 for i, n in enumerate(old)}
    fresh = len(old)
    out = []

    def emit(v, depth):
        nonlocal fresh
        if v[0] is None:
            fresh += 1
            name = fresh
        else:
            name = rename[v[0]]
        out.append((name, depth, frozenset(v[1])))
        for c in v[2]:
            emit(c, depth + 1)

    emit(root, 0)
    return tuple(out), prio


def complement_safra(a: Explicit) -> Explicit:
    """Complement through Safra trees with parity acceptance.

    The complement follows the deterministic run and may, for any odd k,
    switch to a copy that only allows priorities ≥ k; a step with priority
    exactly k there is accepting.
    """
    neutral = 2 * max(1, a.size) + 1
    classes = _letter_classes(a)
    memo: dict = {}

    def det(tree, letter):
        key = (tree, letter)
        hit = memo.get(key)
        if hit is None:
            if tree is None:
                hit = (None, neutral)
            else:
                hit = _safra_successor(tree, letter, a, neutral)
            memo[key] = hit
        return hit

    odd = range(1, neutral + 1, 2)

    def step(key, letter):
        tree2, prio = det(key[1], letter)
        if key[0] == "D":
            yield ("D", tree2)
            for k in odd:
                yield ("K", tree2, k, False)
            return
        _, _, k, _ = key
        if prio >= k:
            yield ("K", tree2, k, prio == k)

    start = ((1, 0, frozenset(a.initial)),) if a.initial else None
    init = [("D", start)] + [("K", start, k, False) for k in odd]
    return _explore(a.nletters, init, step, lambda k: k[0] == "K" and k[3], classes)


def _successors(a: Explicit):
    return [set(d for row in a.delta[q] for d in row) for q in range(a.size)]


def _on_accepting_cycle(a: Explicit, succ) -> set[int]:
    good = set()
    for f in a.accepting:
        seen = set()
        stack = list(succ[f])
        while stack:
            q = stack.pop()
            if q == f:
                good.add(f)
                break
            if q not in seen:
                seen.add(q)
                stack.extend(succ[q])
    return good


def prune(a: Explicit) -> Explicit:
    """Drop states that are unreachable or cannot reach an accepting cycle,
    then merge states with the same acceptance and the same successor blocks
    letter by letter."""
    succ = _successors(a)
    reach = set(a.initial)
    stack = list(a.initial)
    while stack:
        q = stack.pop()
        for d in succ[q]:
            if d not in reach:
                reach.add(d)
                stack.append(d)
    pred: dict[int, set[int]] = {q: set() for q in range(a.size)}
    for q in range(a.size):
        for d in succ[q]:
            pred[d].add(q)
    live = _on_accepting_cycle(a, succ)
    stack = list(live)
    while stack:
        q = stack.pop()
        for p in pred[q]:
            if p not in live:
                live.add(p)
                stack.append(p)
    keep = sorted(reach & live)
    if not keep:
        return Explicit(a.nletters, (), frozenset(), [])
    block = {q: int(q in a.accepting) for q in keep}
    count = len(set(block.values()))
    while True:
        sigs: dict = {}
        new = {}
        for q in keep:
            sig = (block[q],) + tuple(
                frozenset(block[d] for d in row if d in block) for row in a.delta[q]
            )
            new[q] = sigs.setdefault(sig, len(sigs))
        if len(sigs) == count:
            break
        block, count = new, len(sigs)
    block = new
    rep = {}
    for q in keep:
        rep.setdefault(block[q], q)
    delta = [
        [tuple(sorted({block[d] for d in row if d in block})) for row in a.delta[rep[b]]]
        for b in range(count)
    ]
    return Explicit(
        a.nletters,
        tuple(sorted({block[q] for q in a.initial if q in block})),
        frozenset(block[q] for q in keep if q in a.accepting),
        delta,
    )


def nonempty(a: Explicit) -> bool:
    """Some accepting state is reachable and lies on a cycle."""
    succ = [set(d for row in a.delta[q] for d in row) for q in range(a.size)]
    reach = set(a.initial)
    stack = list(a.initial)
    while stack:
        q = stack.pop()
        for d in succ[q]:
            if d not in reach:
                reach.add(d)
                stack.append(d)
    for f in a.accepting & reach:
        seen = set()
        stack = list(succ[f])
        while stack:
            q = stack.pop()
            if q == f:
                return True
            if q not in seen:
                seen.add(q)
                stack.extend(succ[q])
    return False


def accepts(a: Explicit, stem, loop) -> bool:
    """Membership of the letter-index lasso ``stem . loop^ω``."""
    letters = list(stem) + list(loop)
    k = len(letters)
    back = len(stem)

    def succ(v):
        q, i = v
        j = i + 1 if i + 1 < k else back
        return {(d, j) for d in a.delta[q][letters[i]]}

    reach = {(q, 0) for q in a.initial}
    stack = list(reach)
    while stack:
        for w in succ(stack.pop()):
            if w not in reach:
                reach.add(w)
                stack.append(w)
    for v in reach:
        if v[0] not in a.accepting:
            continue
        seen = set()
        stack = list(succ(v))
        while stack:
            w = stack.pop()
            if w == v:
                return True
            if w not in seen:
                seen.add(w)
                stack.extend(succ(w))
    return False


# ---------------------------------------------------------------------------


def check_bounds(t: TransitionSystem, f: F.HyperFormula, max_states: int = MAX_STATES,
                 max_body: int = MAX_BODY) -> list[str]:
    aps = sorted({ap for ap, _ in F.atoms(f.body)})
    if t.num_states > max_states:
        raise OracleBoundsError(f"system has {t.num_states} states (limit {max_states})")
    if len(f.prefix) > MAX_QUANTIFIERS:
        raise OracleBoundsError(f"{len(f.prefix)} quantifiers (limit {MAX_QUANTIFIERS})")
    if F.size(f.body) > max_body:
        raise OracleBoundsError(f"body size {F.size(f.body)} (limit {max_body})")
    if len(f.prefix) * len(aps) > MAX_LETTER_BITS:
        raise OracleBoundsError("explicit alphabet too large")
    return aps


def decide_naive(t: TransitionSystem, f: F.HyperFormula, max_states: int = MAX_STATES,
                 max_body: int = MAX_BODY) -> bool:
    """Reference decision of ``t ⊨ f`` within the oracle bounds.

    ``max_states`` and ``max_body`` raise the size bounds for callers that
    accept a slower reference run; the alphabet bound stays fixed.

    Quantifiers are removed innermost first; ∀π.φ is read as ¬∃π.¬φ, and the
    two negations between quantifiers of the same kind cancel, so the
    automaton is complemented once per alternation.
    """
    aps = check_bounds(t, f, max_states, max_body)
    order = f.variables
    negated = f.prefix[-1][0] == F.FORALL
    a = prune(ltl_explicit(F.Not(f.body) if negated else f.body, order, aps))
    arity = len(order)
    for q, _ in reversed(f.prefix):
        if (q == F.FORALL) != negated:
            a = prune(complement_safra(a))
            negated = not negated
        a = prune(project_last(a, t, aps, arity))
        arity -= 1
    return nonempty(a) != negated

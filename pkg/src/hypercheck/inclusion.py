"""Language inclusion L(A) ⊆ L(B) between symbolic Büchi automata.

Three engines answer the same question:

* ``complement`` -- materialize the complement of B, intersect, check emptiness.
* ``antichain`` -- explore A × complement(B) lazily and prune every product
  state that is subsumed by a state already known to have no accepting lasso.
* ``external`` -- export both automata in BA format and run a command.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field

from .automata import io as aio
from .automata.complement import BreakpointComplement, RankComplement, complement
from .automata.nba import (
    DEFAULT_CAP,
    NBA,
    LassoWord,
    SizeCapExceeded,
    cube_model,
    emptiness,
    find_lasso,
    is_weak,
    member,
    reduce,
)
from .automata.ops import align, intersect
from .budget import checkpoint

ENGINES = ("complement", "antichain", "external")


class ExternalToolError(RuntimeError):
    pass


@dataclass
class InclusionOutcome:
    included: bool
    counterexample: LassoWord | None = None
    stats: dict = field(default_factory=dict)


def include_complement(a: NBA, b: NBA, cap: int = DEFAULT_CAP) -> InclusionOutcome:
    t0 = time.perf_counter()
    a, b = align(a, b)
    nb = complement(b, cap)
    prod = intersect(a, nb, cap)
    res = emptiness(prod)
    stats = {
        "engine": "complement",
        "complement_states": nb.num_states,
        "product_states": prod.num_states,
        "seconds": time.perf_counter() - t0,
    }
    return InclusionOutcome(res.empty, res.witness, stats)


def _dominated(x, y) -> bool:
    return all(a <= b for a, b in zip(x, y))


class _DeadStates:
    """Product states known to start no accepting lasso, kept as antichains.

    Deadness of (q, m, c) means L(A from q) ∩ L(complement from m) = ∅, so it
    ignores the counter c. Subset macros (phase one of the rank construction,
    or breakpoint macros of a weak B) accept the words on which every run of B
    from S rejects; that language shrinks as S grows, so a dead subset makes
    every superset dead. Ranking macros of one family are ordered pointwise.
    """

    def __init__(self, comp):
        self.comp = comp
        self.subsets: dict[int, list[frozenset]] = {}
        self.ranks: dict[tuple, list[tuple]] = {}

    def covers(self, v) -> bool:
        q, m, _ = v
        s = frozenset(m[1])
        if any(d <= s for d in self.subsets.get(q, ())):
            return True
        if m[0] == "R":
            bucket = self.ranks.get((q, self.comp.family(m)), ())
            return any(_dominated(m[2], r) for r in bucket)
        return False

    def add(self, v) -> None:
        q, m, _ = v
        if m[0] != "R":
            s = frozenset(m[1])
            bucket = self.subsets.setdefault(q, [])
            if any(d <= s for d in bucket):
                return
            bucket[:] = [d for d in bucket if not s <= d]
            bucket.append(s)
            return
        bucket = self.ranks.setdefault((q, self.comp.family(m)), [])
        if any(_dominated(m[2], r) for r in bucket):
            return
        bucket[:] = [r for r in bucket if not _dominated(r, m[2])]
        bucket.append(m[2])

    def __len__(self):
        return sum(map(len, self.subsets.values())) + sum(map(len, self.ranks.values()))


def _explore_order(edge):
    m = edge[1][1]
    if m[0] == "R":
        return (0, -sum(m[2]))
    return (1, 0)


def include_antichain(a: NBA, b: NBA, cap: int = DEFAULT_CAP) -> InclusionOutcome:
    """On-the-fly emptiness of A × complement(B) with dead-state subsumption.

    The complement of B is explored lazily (breakpoint macros when B is weak,
    tight rankings otherwise) inside a Tarjan search for an accepting SCC.
    Every completed SCC without acceptance is dead; a new state covered by a
    dead one (see :class:`_DeadStates`) is never expanded.
    """
    t0 = time.perf_counter()
    a, b = align(a, b)
    b = reduce(b)
    if not b.initial or not b.accepting:
        # complement of B is universal: inclusion iff A is empty
        res = emptiness(a)
        stats = {"engine": "antichain", "complementer": "-", "explored": 0, "pruned": 0, "antichain": 0,
                 "seconds": time.perf_counter() - t0}
        return InclusionOutcome(res.empty, res.witness, stats)
    comp = BreakpointComplement(b) if is_weak(b) else RankComplement(b, cap)
    fa = a.accepting
    dead = _DeadStates(comp)
    is_dead = dead.covers

    succ_store: dict[tuple, list] = {}

    def expand(v):
        p, m, c = v
        if c == 0:
            c2 = 1 if p in fa else 0
        else:
            c2 = 0 if comp.accepting(m) else 1
        out = []
        comp_succ = comp.successors(m)
        for p1, n1, d1 in a.edges[p]:
            for cubes, m2 in comp_succ:
                for p2, n2 in cubes:
                    pos, neg = p1 | p2, n1 | n2
                    if not pos & neg:
                        out.append(((pos, neg), (d1, m2, c2)))
        # rankings first, large ones first: once a maximal one is dead it
        # prunes the dominated siblings explored after it
        out.sort(key=_explore_order)
        return out

    def accepting(v):
        return v[2] == 0 and v[0] in fa

    initial = [(p, m, 0) for p in sorted(a.initial) for m in comp.initial()]
    index: dict[tuple, int] = {}
    low: dict[tuple, int] = {}
    stack: list[tuple] = []
    onstack: set[tuple] = set()
    pruned = 0
    found = None

    for root in initial:
        if root in index or is_dead(root):
            continue
        work = [(root, None)]
        while work and found is None:
            v, it = work[-1]
            if it is None:
                index[v] = low[v] = len(index)
                if len(index) > cap:
                    raise SizeCapExceeded(f"antichain search exceeded {cap} states")
                if not len(index) & 63:
                    checkpoint()
                stack.append(v)
                onstack.add(v)
                succ_store[v] = expand(v)
                it = iter(succ_store[v])
                work[-1] = (v, it)
            advanced = False
            for _, w in it:
                if w in index:
                    if w in onstack and index[w] < low[v]:
                        low[v] = index[w]
                    continue
                if is_dead(w):
                    pruned += 1
                    continue
                work.append((w, None))
                advanced = True
                break
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                scc = []
                while True:
                    x = stack.pop()
                    onstack.discard(x)
                    scc.append(x)
                    if x == v:
                        break
                members = set(scc)
                nontrivial = len(scc) > 1 or any(w == v for _, w in succ_store[v])
                if nontrivial and any(accepting(x) for x in scc):
                    found = members
                    break
                for x in scc:
                    dead.add(x)
        if found is not None:
            break

    stats = {
        "engine": "antichain",
        "complementer": comp.name,
        "explored": len(index),
        "pruned": pruned,
        "antichain": len(dead),
        "seconds": time.perf_counter() - t0,
    }
    if found is None:
        return InclusionOutcome(True, None, stats)

    def succ(v):
        return succ_store.get(v, ())

    acc_in = {x: found for x in found if accepting(x)}
    stem, loop = find_lasso([s for s in initial if s in index], succ, acc_in)
    model = lambda cube: cube_model(a.props, cube, a.arity)  # noqa: E731
    word = LassoWord(a.arity, tuple(model(c) for _, c, _ in stem), tuple(model(c) for _, c, _ in loop))
    return InclusionOutcome(False, word, stats)


def include_external(a: NBA, b: NBA, template: str, timeout: float | None = None) -> InclusionOutcome:
    """Run an external inclusion checker on BA exports of A and B.

    ``template`` is a command line containing ``{A}`` and ``{B}``, replaced by
    file paths. The tool prints ``INCLUDED`` or ``NOT INCLUDED``, optionally
    followed by ``CEX: <stem>$<loop>`` in letter names of the exported files.
    """
    if "{A}" not in template or "{B}" not in template:
        raise ExternalToolError("command template must contain {A} and {B}")
    t0 = time.perf_counter()
    a, b = align(a, b)
    text_a, text_b = aio.export_ba(a), aio.export_ba(b)
    with tempfile.TemporaryDirectory(prefix="hypercheck-") as tmp:
        pa, pb = os.path.join(tmp, "a.ba"), os.path.join(tmp, "b.ba")
        with open(pa, "w") as fh:
            fh.write(text_a)
        with open(pb, "w") as fh:
            fh.write(text_b)
        cmd = template.replace("{A}", shlex.quote(pa)).replace("{B}", shlex.quote(pb))
        try:
            proc = subprocess.run(cmd, shell=True, capture_output=True, text=True, timeout=timeout)
        except subprocess.TimeoutExpired as e:
            raise ExternalToolError(f"external tool timed out after {timeout}s") from e
    lines = [l.strip() for l in proc.stdout.splitlines() if l.strip()]
    verdict = next((l for l in lines if l in ("INCLUDED", "NOT INCLUDED")), None)
    if verdict is None:
        raise ExternalToolError(
            f"external tool gave no verdict (exit {proc.returncode}): {proc.stderr.strip()[:200]}"
        )
    stats = {"engine": "external", "seconds": time.perf_counter() - t0}
    if verdict == "INCLUDED":
        return InclusionOutcome(True, None, stats)
    cex_line = next((l for l in lines if l.startswith("CEX:")), None)
    if cex_line is None:
        return InclusionOutcome(False, None, stats)
    stem, loop = aio.parse_cex(cex_line)
    try:
        decode = lambda names: tuple(  # noqa: E731
            aio.letter_from_mask(a.props, int(n[1:]), a.arity) for n in names
        )
        word = LassoWord(a.arity, decode(stem), decode(loop))
    except (ValueError, IndexError) as e:
        raise ExternalToolError(f"malformed counterexample {cex_line!r}") from e
    if not member(a, word) or member(b, word):
        raise ExternalToolError("external counterexample is not in L(A) \\ L(B)")
    return InclusionOutcome(False, word, stats)


def ba_inclusion_tool(text_a: str, text_b: str) -> str:
    """Answer an inclusion query between two BA files in the external-tool protocol."""
    a, b, decode = aio.ba_pair_to_nba(text_a, text_b)
    out = include_complement(a, b)
    if out.included:
        return "INCLUDED\n"
    stem, loop = aio.decode_ba_word(out.counterexample, a.props, decode)
    return "NOT INCLUDED\n" + aio.format_cex(stem, loop) + "\n"


def include(a: NBA, b: NBA, engine: str = "complement", cap: int = DEFAULT_CAP, command: str | None = None,
            timeout: float | None = None) -> InclusionOutcome:
    if engine == "complement":
        return include_complement(a, b, cap)
    if engine == "antichain":
        return include_antichain(a, b, cap)
    if engine == "external":
        if command is None:
            raise ExternalToolError("external engine needs a command template")
        return include_external(a, b, command, timeout)
    raise ValueError(f"unknown inclusion engine {engine!r}")


__all__ = [
    "ENGINES",
    "ExternalToolError",
    "InclusionOutcome",
    "ba_inclusion_tool",
    "include",
    "include_antichain",
    "include_complement",
    "include_external",
]

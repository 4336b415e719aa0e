"""HyperLTL model checking by automata-based quantifier elimination.

The body is translated to an automaton over n-tuples of traces and the
prefix is eliminated innermost first. The driver tracks polarity: it holds
an automaton either for the current subformula or for its negation, and
complements only when the next quantifier needs the other one (∃ needs the
positive automaton, ∀ the negated one, since ∀π.φ = ¬∃π.¬φ). So a prefix
with k alternations costs k complementations.

With the inclusion strategy a leading ∀ⁿ block is not eliminated. The rest
of the prefix is reduced to an automaton A over n-tuples, and the formula
holds iff every zip of n system traces is accepted by A, which is one
language-inclusion query. A formula that starts with ∃ is checked through
its negation.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field

from . import formula as F
from .automata.complement import complement
from .automata.ltl2nba import ltl_to_nba
from .automata.nba import DEFAULT_CAP, NBA, LassoWord, emptiness, member
from .automata.ops import exists_step, self_composition
from .budget import checkpoint, time_limit
from .inclusion import include
from .system import TransitionSystem

STRATEGIES = ("auto", "pure-abv", "inclusion")
EXISTENTIAL_WITNESS = "existential-witness"
UNIVERSAL_COUNTEREXAMPLE = "universal-counterexample"


class NoWitness(LookupError):
    pass


@dataclass(frozen=True)
class Stage:
    name: str
    states: int
    edges: int
    seconds: float


@dataclass
class CheckStats:
    strategy: str
    engine: str
    negated: bool = False
    complement_count: int = 0
    complement_seconds: list[float] = field(default_factory=list)
    stages: list[Stage] = field(default_factory=list)
    inclusion: dict | None = None
    total_seconds: float = 0.0


@dataclass
class Verdict:
    holds: bool
    witness: LassoWord | None = None
    witness_role: str | None = None
    witness_vars: tuple[str, ...] = ()
    stats: CheckStats | None = None


def _check_aps(t: TransitionSystem, f: F.HyperFormula) -> None:
    missing = sorted({ap for ap, _ in F.atoms(f.body)} - set(t.ap))
    if missing:
        raise ValueError(f"formula uses propositions not declared by the system: {', '.join(missing)}")


def _record(stats: CheckStats, name: str, a: NBA, t0: float) -> float:
    now = time.perf_counter()
    stats.stages.append(Stage(name, a.num_states, a.num_edges, now - t0))
    checkpoint()
    return now


def _eliminate(t: TransitionSystem, f: F.HyperFormula, keep: int, cap: int, stats: CheckStats):
    """Eliminate quantifiers ``keep..end`` of the prefix, innermost first.

    Returns ``(automaton, negated)`` over the first ``keep`` variables; when
    ``negated`` is set the automaton is for the negation of the suffix.
    """
    prefix = f.prefix
    order = f.variables
    t0 = time.perf_counter()
    negated = len(prefix) > keep and prefix[-1][0] == F.FORALL
    body = F.Not(f.body) if negated else f.body
    a = ltl_to_nba(body, order)
    t0 = _record(stats, "negated body" if negated else "body", a, t0)
    for q, var in reversed(prefix[keep:]):
        want_negated = q == F.FORALL
        if want_negated != negated:
            a = complement(a, cap)
            negated = want_negated
            stats.complement_count += 1
            now = time.perf_counter()
            stats.complement_seconds.append(now - t0)
            t0 = _record(stats, "complement", a, t0)
        a = exists_step(a, t, cap)
        t0 = _record(stats, f"eliminate {var}", a, t0)
    return a, negated


def _pure_abv(t, f, cap, stats) -> bool:
    a, negated = _eliminate(t, f, 0, cap, stats)
    nonempty = not emptiness(a).empty
    return nonempty != negated


def _inclusion_pair(t, f, cap, stats):
    blocks = f.blocks()
    n = len(blocks[0][1])
    a, negated = _eliminate(t, f, n, cap, stats)
    if negated:
        t0 = time.perf_counter()
        a = complement(a, cap)
        stats.complement_count += 1
        stats.complement_seconds.append(time.perf_counter() - t0)
        _record(stats, "complement", a, t0)
    t0 = time.perf_counter()
    sc = self_composition(t, n, cap)
    _record(stats, "self-composition", sc, t0)
    return sc, a


def inclusion_instance(t: TransitionSystem, f: F.HyperFormula, cap: int = DEFAULT_CAP) -> tuple[NBA, NBA]:
    """The pair ``(self-composition, suffix automaton)`` whose inclusion decides a ∀-leading ``f``."""
    if not f.prefix or f.prefix[0][0] != F.FORALL:
        raise ValueError("inclusion instances need a formula whose first quantifier is forall")
    _check_aps(t, f)
    return _inclusion_pair(t, f, cap, CheckStats(strategy="inclusion", engine="-"))


def _inclusion(t, f, engine, cap, stats, command, timeout):
    """``f`` must be ∀-leading. Returns ``(holds, counterexample zip)``."""
    sc, a = _inclusion_pair(t, f, cap, stats)
    out = include(sc, a, engine, cap, command, timeout)
    stats.inclusion = out.stats
    if not out.included and out.counterexample is not None:
        if not member(sc, out.counterexample):
            raise AssertionError("inclusion counterexample is not a tuple of system traces")
    return out.included, out.counterexample


def _parse_engine(engine: str) -> tuple[str, str | None]:
    if engine.startswith("external:"):
        return "external", engine[len("external:") :]
    return engine, None


def check(
    t: TransitionSystem,
    f: F.HyperFormula,
    engine: str = "complement",
    strategy: str = "auto",
    cap: int = DEFAULT_CAP,
    timeout: float | None = None,
    want_witness: bool = False,
) -> Verdict:
    """Decide ``t ⊨ f``.

    ``engine`` is ``complement``, ``antichain`` or ``external:<template>``.
    ``strategy`` ``auto`` uses the inclusion path when the formula has a
    quantifier alternation to absorb (or when a witness is requested), and
    plain elimination otherwise. Resource failures raise
    (:class:`~hypercheck.budget.CheckTimeout`,
    :class:`~hypercheck.automata.nba.SizeCapExceeded`,
    :class:`~hypercheck.inclusion.ExternalToolError`).
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    _check_aps(t, f)
    engine_name, command = _parse_engine(engine)
    if strategy == "auto":
        strategy = "inclusion" if (f.alternations >= 1 or want_witness) else "pure-abv"
    stats = CheckStats(strategy=strategy, engine=engine_name if strategy == "inclusion" else "-")
    start = time.perf_counter()
    with time_limit(timeout):
        if strategy == "pure-abv":
            holds = _pure_abv(t, f, cap, stats)
            verdict = Verdict(holds, stats=stats)
        else:
            leading = f.prefix[0][0]
            target = f if leading == F.FORALL else F.negate(f)
            stats.negated = target is not f
            included, cx = _inclusion(t, target, engine_name, cap, stats, command, timeout)
            holds = included if leading == F.FORALL else not included
            verdict = Verdict(holds, stats=stats)
            if cx is not None:
                n = len(target.blocks()[0][1])
                verdict.witness = cx
                verdict.witness_vars = target.variables[:n]
                verdict.witness_role = (
                    UNIVERSAL_COUNTEREXAMPLE if leading == F.FORALL else EXISTENTIAL_WITNESS
                )
    stats.total_seconds = time.perf_counter() - start
    return verdict


def extract_witness(v: Verdict) -> tuple[LassoWord, str]:
    """The lasso (zip of the leading block's traces) certifying ``v``, with its role."""
    if v.witness is None:
        if v.stats is not None and v.stats.strategy != "inclusion":
            raise NoWitness("witnesses are only produced by the inclusion strategy")
        raise NoWitness("no witness for this verdict (a universal property that holds, "
                        "or an existential one that fails)")
    return v.witness, v.witness_role


def stats_report(v: Verdict, fmt: str = "text") -> str:
    s = v.stats
    if s is None:
        return ""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["stage", "states", "edges", "seconds"])
        for st in s.stages:
            w.writerow([st.name, st.states, st.edges, f"{st.seconds:.6f}"])
        w.writerow(["complements", s.complement_count, "", ";".join(f"{x:.6f}" for x in s.complement_seconds)])
        w.writerow(["total", "", "", f"{s.total_seconds:.6f}"])
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown stats format {fmt!r}")
    lines = [
        f"strategy: {s.strategy}" + (" (negated formula)" if s.negated else ""),
        f"engine: {s.engine}",
        f"complementations: {s.complement_count}",
    ]
    for st in s.stages:
        lines.append(f"  {st.name:<20} {st.states:>8} states {st.edges:>9} edges {st.seconds * 1000:10.2f} ms")
    if s.inclusion:
        extra = ", ".join(f"{k}={v:.4f}" if isinstance(v, float) else f"{k}={v}" for k, v in s.inclusion.items())
        lines.append(f"inclusion: {extra}")
    lines.append(f"total: {s.total_seconds * 1000:.2f} ms")
    return "\n".join(lines) + "\n"

"""Random instances (systems, formulas, automata, words) and benchmark sweeps."""

from __future__ import annotations

import csv
import random
import statistics
import string
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import formula as F
from .automata.nba import NBA, LassoWord, build_nba, sort_props
from .system import TransitionSystem


def ap_names(count: int) -> list[str]:
    if count <= 26:
        return list(string.ascii_lowercase[:count])
    return [f"a{i}" for i in range(count)]


# ---------------------------------------------------------------------------
# Systems


@dataclass(frozen=True)
class GenStats:
    pre_repair_edges: int
    reach_edges_added: int
    total_edges_added: int


def gen_system_stats(n: int, p: float, ap_count: int, seed: int) -> tuple[TransitionSystem, GenStats]:
    """Erdős–Rényi–Gilbert digraph on ``n`` states plus connectivity/totality repair."""
    if n < 1:
        raise ValueError("need at least one state")
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    adj = rng.random((n, n)) < p
    succ: list[set[int]] = [set(np.flatnonzero(row).tolist()) for row in adj]
    pre = sum(len(s) for s in succ)
    pyrng = random.Random(int(rng.integers(0, 2**63)))

    # make every state reachable from state 0
    reached = {0}
    stack = [0]
    added_reach = 0

    def close(stack):
        while stack:
            s = stack.pop()
            for t in succ[s]:
                if t not in reached:
                    reached.add(t)
                    stack.append(t)

    close(stack)
    while len(reached) < n:
        src = pyrng.choice(sorted(reached))
        dst = pyrng.choice([s for s in range(n) if s not in reached])
        succ[src].add(dst)
        added_reach += 1
        reached.add(dst)
        close([dst])
    added = added_reach
    for s in range(n):
        if not succ[s]:
            succ[s].add(pyrng.randrange(n))
            added += 1
    aps = ap_names(ap_count)
    labels = rng.random((n, ap_count)) < 0.5
    system = TransitionSystem(
        ap=tuple(aps),
        initial=frozenset({0}),
        succ=tuple(tuple(sorted(s)) for s in succ),
        labels=tuple(frozenset(a for a, on in zip(aps, row) if on) for row in labels),
    )
    return system, GenStats(pre, added_reach, added)


def gen_system(n: int, p: float, ap_count: int, seed: int) -> TransitionSystem:
    return gen_system_stats(n, p, ap_count, seed)[0]


# ---------------------------------------------------------------------------
# Formulas

_WEIGHTS = {
    "atom": 0.35,
    "not": 0.1,
    "and": 0.1,
    "or": 0.1,
    "next": 0.1,
    "until": 0.075,
    "release": 0.075,
    "globally": 0.05,
    "eventually": 0.05,
}
_UNARY = {"not": F.Not, "next": F.Next, "globally": F.Globally, "eventually": F.Eventually}
_BINARY = {"and": F.And, "or": F.Or, "until": F.Until, "release": F.Release}


def random_body(size: int, aps, variables, rng: random.Random, const_prob: float = 0.05) -> F.Ltl:
    """Random body with exactly ``size`` nodes; atoms uniform over ``aps x variables``."""
    if size < 1:
        raise ValueError("body size must be at least 1")
    if size == 1:
        if not variables or rng.random() < const_prob:
            return F.Const(rng.random() < 0.5)
        return F.Atom(rng.choice(list(aps)), rng.choice(list(variables)))
    ops = [k for k in _WEIGHTS if k != "atom" and (k in _UNARY or size >= 3)]
    op = rng.choices(ops, weights=[_WEIGHTS[k] for k in ops])[0]
    if op in _UNARY:
        return _UNARY[op](random_body(size - 1, aps, variables, rng, const_prob))
    left = rng.randint(1, size - 2)
    return _BINARY[op](
        random_body(left, aps, variables, rng, const_prob),
        random_body(size - 1 - left, aps, variables, rng, const_prob),
    )


def parse_pattern(pattern: str) -> list[str]:
    quants = []
    for ch in pattern:
        if ch in "aA∀":
            quants.append(F.FORALL)
        elif ch in "eE∃":
            quants.append(F.EXISTS)
        else:
            raise ValueError(f"bad quantifier pattern character {ch!r}")
    return quants


def gen_formula(pattern: str, body_size: int, ap_count: int, seed: int) -> F.HyperFormula:
    """Random closed HyperLTL formula with the given prefix pattern (e.g. ``"aae"``)."""
    rng = random.Random(seed)
    quants = parse_pattern(pattern)
    variables = [f"p{i + 1}" for i in range(len(quants))]
    body = random_body(body_size, ap_names(ap_count), variables, rng)
    return F.HyperFormula(tuple(zip(quants, variables)), body)


# ---------------------------------------------------------------------------
# Words and automata (test currency)


def random_letter(arity: int, aps, rng: random.Random):
    return tuple(frozenset(a for a in aps if rng.random() < 0.5) for _ in range(arity))


def random_lasso(arity: int, aps, rng: random.Random, max_stem: int = 3, max_loop: int = 3) -> LassoWord:
    stem = tuple(random_letter(arity, aps, rng) for _ in range(rng.randint(0, max_stem)))
    loop = tuple(random_letter(arity, aps, rng) for _ in range(rng.randint(1, max_loop)))
    return LassoWord(arity, stem, loop)


def random_nba(
    rng: random.Random,
    states: int = 4,
    aps=("a", "b"),
    arity: int = 1,
    density: float = 0.35,
    accept_prob: float = 0.35,
) -> NBA:
    """Random automaton with random cubes over ``aps x range(arity)``."""
    props = sort_props((a, i) for a in aps for i in range(arity))
    k = len(props)
    edges = []
    for s in range(states):
        for d in range(states):
            if rng.random() < density:
                for _ in range(rng.randint(1, 2)):
                    pos = neg = 0
                    for b in range(k):
                        r = rng.random()
                        if r < 0.25:
                            pos |= 1 << b
                        elif r < 0.5:
                            neg |= 1 << b
                    edges.append((s, (pos, neg), d))
    initial = [0] + [s for s in range(1, states) if rng.random() < 0.15]
    accepting = [s for s in range(states) if rng.random() < accept_prob]
    a = build_nba(arity, props, initial, accepting, edges)
    # keep declared state count even when some states are isolated
    return _pad(a, states)


def _pad(a: NBA, states: int) -> NBA:
    if a.num_states >= states:
        return a
    extra = states - a.num_states
    return NBA(a.arity, a.props, a.initial, a.accepting, a.edges + ((),) * extra)


# ---------------------------------------------------------------------------
# Inclusion benchmark export


def export_inclusion_instance(t: TransitionSystem, f: F.HyperFormula, out_prefix: str,
                              cap: int = 10**6) -> dict:
    """Write the inclusion query deciding a ∀-leading ``f`` on ``t``.

    Files: ``<prefix>.sys.hoa`` / ``<prefix>.prop.hoa`` always, and the
    ``.ba`` pair when the explicit alphabet is small enough. Returns
    ``{"files": [...], "notices": [...]}``.
    """
    from .automata import io as aio
    from .automata.ops import align
    from .checker import inclusion_instance

    sc, a = inclusion_instance(t, f, cap)
    sc, a = align(sc, a)
    files = []
    notices = []
    for suffix, text in ((".sys.hoa", aio.export_hoa(sc)), (".prop.hoa", aio.export_hoa(a))):
        path = out_prefix + suffix
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        files.append(path)
    try:
        texts = (aio.export_ba(sc), aio.export_ba(a))
    except aio.AlphabetTooLarge as e:
        notices.append(f"ba skipped: {e}")
    else:
        for suffix, text in zip((".sys.ba", ".prop.ba"), texts):
            path = out_prefix + suffix
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
            files.append(path)
    return {"files": files, "notices": notices}


# ---------------------------------------------------------------------------
# Sweeps

CSV_FIELDS = (
    "pattern", "n", "p", "body_size", "seed", "verdict", "wall_ms",
    "complement_ms_list", "stage_sizes", "engine", "status",
)


@dataclass(frozen=True)
class SweepConfig:
    sizes: tuple[int, ...] = (10,)
    densities: tuple[float, ...] = ()
    outdegrees: tuple[float, ...] = (3.0,)
    patterns: tuple[str, ...] = ("ae",)
    body_sizes: tuple[int, ...] = (10,)
    samples: int = 10
    ap_count: int = 2
    seed: int = 0
    timeout: float = 30.0
    engine: str = "complement"
    strategy: str = "auto"

    def cells(self):
        """``(pattern, n, p, body_size)`` for every grid cell, in a fixed order."""
        for pattern in self.patterns:
            for n in self.sizes:
                ps = list(self.densities) or [min(1.0, k / n) for k in self.outdegrees]
                for p in ps:
                    for size in self.body_sizes:
                        yield pattern, n, p, size


_LIST_KEYS = {"sizes": int, "densities": float, "outdegrees": float, "patterns": str, "body_sizes": int}
_SCALAR_KEYS = {"samples": int, "ap_count": int, "seed": int, "timeout": float, "engine": str, "strategy": str}


def parse_sweep_config(text: str) -> SweepConfig:
    """``key = value`` lines (``#`` comments); list values are whitespace or comma separated.

    Giving ``densities`` overrides ``outdegrees`` (p = outdegree / n).
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip()
        if not sep:
            raise ValueError(f"line {lineno}: expected key = value")
        items = val.replace(",", " ").split()
        if key in _LIST_KEYS:
            try:
                values[key] = tuple(_LIST_KEYS[key](x) for x in items)
            except ValueError:
                raise ValueError(f"line {lineno}: bad value for {key}") from None
        elif key in _SCALAR_KEYS:
            if len(items) != 1:
                raise ValueError(f"line {lineno}: {key} takes one value")
            try:
                values[key] = _SCALAR_KEYS[key](items[0])
            except ValueError:
                raise ValueError(f"line {lineno}: bad value for {key}") from None
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if "densities" in values and "outdegrees" not in values:
        values["outdegrees"] = ()
    for pattern in values.get("patterns", ()):
        parse_pattern(pattern)
    return SweepConfig(**values)


def run_instance(pattern: str, n: int, p: float, body_size: int, seed: int, ap_count: int = 2,
                 timeout: float | None = 30.0, engine: str = "complement", strategy: str = "auto") -> dict:
    """Generate and check one instance; resource failures become rows, not exceptions."""
    from .automata.nba import SizeCapExceeded
    from .budget import CheckTimeout
    from .checker import check
    from .inclusion import ExternalToolError

    t = gen_system(n, p, ap_count, seed)
    f = gen_formula(pattern, body_size, ap_count, seed)
    row = {
        "pattern": pattern, "n": n, "p": f"{p:.6g}", "body_size": body_size, "seed": seed,
        "engine": engine, "complement_ms_list": "", "stage_sizes": "",
    }
    t0 = time.perf_counter()
    try:
        v = check(t, f, engine=engine, strategy=strategy, timeout=timeout)
    except CheckTimeout:
        row.update(verdict="TIMEOUT", status="timeout")
    except SizeCapExceeded:
        row.update(verdict="ERROR", status="cap")
    except ExternalToolError:
        row.update(verdict="ERROR", status="external")
    else:
        s = v.stats
        row.update(
            verdict="HOLDS" if v.holds else "FAILS",
            status="ok",
            complement_ms_list=";".join(f"{x * 1000:.3f}" for x in s.complement_seconds),
            stage_sizes=";".join(str(st.states) for st in s.stages),
        )
    row["wall_ms"] = f"{(time.perf_counter() - t0) * 1000:.3f}"
    return row


def _run_task(args):
    return run_instance(*args)


def sweep_tasks(cfg: SweepConfig):
    for pattern, n, p, size in cfg.cells():
        for i in range(cfg.samples):
            yield (pattern, n, p, size, cfg.seed + i, cfg.ap_count, cfg.timeout, cfg.engine, cfg.strategy)


def sweep(cfg: SweepConfig, out, jobs: int = 1) -> list[dict]:
    """Run every cell of ``cfg`` and write CSV rows to the text stream ``out``.

    Rows come out in task order whatever ``jobs`` is, so a fixed config
    always yields the same rows apart from timings.
    """
    writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    tasks = list(sweep_tasks(cfg))
    rows = []
    if jobs <= 1:
        results = map(_run_task, tasks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(_run_task, tasks)
    try:
        for row in results:
            writer.writerow(row)
            rows.append(row)
    finally:
        if pool is not None:
            pool.shutdown()
    return rows


def summarize(rows) -> list[dict]:
    """Per-cell success rate within the timeout and median wall time of the successes."""
    cells: dict[tuple, list[dict]] = {}
    for r in rows:
        cells.setdefault((r["pattern"], r["n"], r["p"], r["body_size"]), []).append(r)
    out = []
    for (pattern, n, p, size), rs in cells.items():
        ok = [float(r["wall_ms"]) for r in rs if r["status"] == "ok"]
        out.append({
            "pattern": pattern, "n": n, "p": p, "body_size": size, "samples": len(rs),
            "success_rate": len(ok) / len(rs),
            "median_ms": statistics.median(ok) if ok else None,
        })
    return out

"""Finite transition systems and the explicit-state text format.

Format (``#`` starts a comment)::

    aps: a b c
    init: 0 1
    state 0 {a c}
    -> 1 2
    state 1 {}
    -> 0
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping


class SystemFormatError(ValueError):
    pass


@dataclass(frozen=True)
class TransitionSystem:
    """Total transition system with states ``0..n-1``."""

    ap: tuple[str, ...]
    initial: frozenset[int]
    succ: tuple[tuple[int, ...], ...]
    labels: tuple[frozenset[str], ...]

    def __post_init__(self):
        n = len(self.succ)
        if len(self.labels) != n:
            raise SystemFormatError("labels and successor lists differ in length")
        if not self.initial:
            raise SystemFormatError("missing initial state")
        for s in self.initial:
            if not 0 <= s < n:
                raise SystemFormatError(f"initial state {s} does not exist")
        declared = set(self.ap)
        for s, (out, lab) in enumerate(zip(self.succ, self.labels)):
            if not out:
                raise SystemFormatError(f"state {s} has no successor")
            for t in out:
                if not 0 <= t < n:
                    raise SystemFormatError(f"edge {s} -> {t} targets an unknown state")
            extra = lab - declared
            if extra:
                raise SystemFormatError(f"state {s} uses undeclared AP {sorted(extra)[0]!r}")

    @property
    def num_states(self) -> int:
        return len(self.succ)

    @property
    def num_edges(self) -> int:
        return sum(len(o) for o in self.succ)

    @classmethod
    def build(
        cls,
        ap: Iterable[str],
        initial: Iterable[int],
        edges: Mapping[int, Iterable[int]],
        labels: Mapping[int, Iterable[str]],
    ) -> "TransitionSystem":
        """Build from dicts keyed by arbitrary nonnegative ids (renumbered densely)."""
        ids = sorted(set(edges) | set(labels) | set(initial))
        index = {s: i for i, s in enumerate(ids)}
        succ = []
        for s in ids:
            out = edges.get(s, ())
            try:
                succ.append(tuple(sorted({index[t] for t in out})))
            except KeyError as e:
                raise SystemFormatError(f"edge {s} -> {e.args[0]} targets an unknown state") from None
        return cls(
            ap=tuple(ap),
            initial=frozenset(index[s] for s in initial),
            succ=tuple(succ),
            labels=tuple(frozenset(labels.get(s, ())) for s in ids),
        )

    def reachable(self) -> "TransitionSystem":
        """Restriction to states reachable from the initial ones."""
        seen = set(self.initial)
        stack = list(self.initial)
        while stack:
            s = stack.pop()
            for t in self.succ[s]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return TransitionSystem.build(
            self.ap,
            self.initial,
            {s: self.succ[s] for s in seen},
            {s: self.labels[s] for s in seen},
        )


_STATE_RE = re.compile(r"^state\s+(\d+)\s*\{([^}]*)\}\s*$")


def parse_system(text: str) -> TransitionSystem:
    ap: list[str] | None = None
    init: list[int] | None = None
    edges: dict[int, list[int]] = {}
    labels: dict[int, list[str]] = {}
    current: int | None = None

    def fail(lineno: int, msg: str):
        raise SystemFormatError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("aps:"):
            if ap is not None:
                fail(lineno, "duplicate 'aps:' line")
            ap = line[4:].split()
            if len(set(ap)) != len(ap):
                fail(lineno, "duplicate AP name")
        elif line.startswith("init:"):
            if init is not None:
                fail(lineno, "duplicate 'init:' line")
            try:
                init = [int(x) for x in line[5:].split()]
            except ValueError:
                fail(lineno, "state ids must be nonnegative integers")
        elif line.startswith("state"):
            m = _STATE_RE.match(line)
            if not m:
                fail(lineno, "expected 'state <id> {<ap-list>}'")
            current = int(m.group(1))
            if current in labels:
                fail(lineno, f"state {current} declared twice")
            labels[current] = m.group(2).split()
        elif line.startswith("->"):
            if current is None or current in edges:
                fail(lineno, "'->' line must follow a state declaration")
            try:
                edges[current] = [int(x) for x in line[2:].split()]
            except ValueError:
                fail(lineno, "state ids must be nonnegative integers")
        else:
            fail(lineno, f"cannot parse {line!r}")

    if ap is None:
        raise SystemFormatError("missing 'aps:' line")
    if init is None or not init:
        raise SystemFormatError("missing initial state ('init:' line)")
    declared = set(ap)
    for s, lab in labels.items():
        for a in lab:
            if a not in declared:
                raise SystemFormatError(f"state {s} uses undeclared AP {a!r}")
        if not edges.get(s):
            raise SystemFormatError(f"state {s} has no successor")
    for s in init:
        if s not in labels:
            raise SystemFormatError(f"initial state {s} is not declared")
    for s, out in edges.items():
        for t in out:
            if t not in labels:
                raise SystemFormatError(f"edge {s} -> {t} targets an undeclared state")
    return TransitionSystem.build(ap, init, edges, labels)


def print_system(t: TransitionSystem) -> str:
    lines = [
        "aps: " + " ".join(t.ap),
        "init: " + " ".join(str(s) for s in sorted(t.initial)),
    ]
    for s in range(t.num_states):
        lab = " ".join(a for a in t.ap if a in t.labels[s])
        lines.append(f"state {s} {{{lab}}}")
        lines.append("-> " + " ".join(str(x) for x in t.succ[s]))
    return "\n".join(lines) + "\n"


def load_system(path) -> TransitionSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())

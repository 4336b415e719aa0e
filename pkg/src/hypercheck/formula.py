"""HyperLTL syntax: AST, parser, printer and normal forms.

Concrete syntax::

    forall p1. exists p2. G (a_p1 <-> a_p2)

Atoms are written ``name_tracevar`` (split at the last underscore). Binary
operators from loosest to tightest: ``<->``, ``->`` (right assoc), ``|``,
``&``, then ``U``/``R``/``W`` (right assoc). Unary operators ``!``, ``X``,
``G``, ``F`` bind tightest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator


class FormulaError(ValueError):
    """Syntax or well-formedness error, optionally carrying a position."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Ltl:
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False, kw_only=True)

    def children(self) -> tuple[Ltl, ...]:
        return ()

    def __str__(self) -> str:
        return print_body(self)


@dataclass(frozen=True)
class Const(Ltl):
    value: bool


@dataclass(frozen=True)
class Atom(Ltl):
    prop: str
    var: str


@dataclass(frozen=True)
class Unary(Ltl):
    arg: Ltl

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Binary(Ltl):
    left: Ltl
    right: Ltl

    def children(self):
        return (self.left, self.right)


class Not(Unary):
    pass


class Next(Unary):
    pass


class Eventually(Unary):
    pass


class Globally(Unary):
    pass


class And(Binary):
    pass


class Or(Binary):
    pass


class Implies(Binary):
    pass


class Iff(Binary):
    pass


class Until(Binary):
    pass


class Release(Binary):
    pass


class WeakUntil(Binary):
    pass


TRUE = Const(True)
FALSE = Const(False)

FORALL = "forall"
EXISTS = "exists"


@dataclass(frozen=True)
class HyperFormula:
    prefix: tuple[tuple[str, str], ...]
    body: Ltl

    def __post_init__(self):
        names = [v for _, v in self.prefix]
        for q, _ in self.prefix:
            if q not in (FORALL, EXISTS):
                raise FormulaError(f"unknown quantifier {q!r}")
        seen = set()
        for v in names:
            if v in seen:
                raise FormulaError(f"duplicate trace variable {v!r} in prefix")
            seen.add(v)
        unbound = free_vars(self.body) - seen
        if unbound:
            raise FormulaError(f"unbound trace variable {sorted(unbound)[0]!r}")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for _, v in self.prefix)

    @property
    def alternations(self) -> int:
        qs = [q for q, _ in self.prefix]
        return sum(1 for a, b in zip(qs, qs[1:]) if a != b)

    def blocks(self) -> list[tuple[str, list[str]]]:
        """Maximal runs of equal quantifiers, outermost first."""
        out: list[tuple[str, list[str]]] = []
        for q, v in self.prefix:
            if out and out[-1][0] == q:
                out[-1][1].append(v)
            else:
                out.append((q, [v]))
        return out

    def __str__(self) -> str:
        return print_formula(self)


# ---------------------------------------------------------------------------
# Traversal helpers


def walk(f: Ltl) -> Iterator[Ltl]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children()))


def size(f: Ltl) -> int:
    return sum(1 for _ in walk(f))


def free_vars(f: Ltl) -> set[str]:
    return {g.var for g in walk(f) if isinstance(g, Atom)}


def atoms(f: Ltl) -> set[tuple[str, str]]:
    return {(g.prop, g.var) for g in walk(f) if isinstance(g, Atom)}


# ---------------------------------------------------------------------------
# Lexer / parser

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<op><->|->|[!&|().])
  | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)

_UNARY = {"!": Not, "X": Next, "G": Globally, "F": Eventually}
_TEMPORAL_BIN = {"U": Until, "R": Release, "W": WeakUntil}
_KEYWORDS = {"X", "G", "F", "U", "R", "W", "true", "false", "forall", "exists"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, line_start = 0, 1, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise FormulaError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "op":
            toks.append(_Tok("op", m.group(), line, i - line_start + 1))
        elif kind == "ident":
            toks.append(_Tok("ident", m.group(), line, i - line_start + 1))
        i = m.end()
    toks.append(_Tok("eof", "", line, i - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None) -> FormulaError:
        tok = tok or self.tok
        return FormulaError(msg, tok.line, tok.col)

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def formula(self) -> HyperFormula:
        prefix = []
        seen: dict[str, _Tok] = {}
        while self.at(FORALL) or self.at(EXISTS):
            q = self.advance().text
            var = self.tok
            if var.kind != "ident" or var.text in _KEYWORDS or "_" in var.text:
                raise self.error("expected trace variable name")
            self.advance()
            if var.text in seen:
                raise self.error(f"duplicate trace variable {var.text!r} in prefix", var)
            seen[var.text] = var
            self.expect(".")
            prefix.append((q, var.text))
        body = self.iff()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        for node in walk(body):
            if isinstance(node, Atom) and node.var not in seen:
                line, col = node.pos or (None, None)
                raise FormulaError(f"unbound trace variable {node.var!r}", line, col)
        return HyperFormula(tuple(prefix), body)

    def iff(self) -> Ltl:
        left = self.implies()
        while self.at("<->"):
            t = self.advance()
            left = Iff(left, self.implies(), pos=(t.line, t.col))
        return left

    def implies(self) -> Ltl:
        left = self.disj()
        if self.at("->"):
            t = self.advance()
            return Implies(left, self.implies(), pos=(t.line, t.col))
        return left

    def disj(self) -> Ltl:
        left = self.conj()
        while self.at("|"):
            t = self.advance()
            left = Or(left, self.conj(), pos=(t.line, t.col))
        return left

    def conj(self) -> Ltl:
        left = self.temporal()
        while self.at("&"):
            t = self.advance()
            left = And(left, self.temporal(), pos=(t.line, t.col))
        return left

    def temporal(self) -> Ltl:
        left = self.unary()
        if self.tok.kind == "ident" and self.tok.text in _TEMPORAL_BIN:
            t = self.advance()
            return _TEMPORAL_BIN[t.text](left, self.temporal(), pos=(t.line, t.col))
        return left

    def unary(self) -> Ltl:
        t = self.tok
        pos = (t.line, t.col)
        if t.text in _UNARY and t.kind in ("op", "ident"):
            self.advance()
            return _UNARY[t.text](self.unary(), pos=pos)
        if self.at("("):
            self.advance()
            inner = self.iff()
            self.expect(")")
            return inner
        if t.kind == "ident":
            self.advance()
            if t.text == "true":
                return Const(True, pos=pos)
            if t.text == "false":
                return Const(False, pos=pos)
            if t.text in _KEYWORDS:
                raise self.error(f"unexpected keyword {t.text!r}", t)
            prop, sep, var = t.text.rpartition("_")
            if not sep or not prop or not var:
                raise self.error(f"atom {t.text!r} must be written name_tracevar", t)
            return Atom(prop, var, pos=pos)
        found = t.text or "end of input"
        raise self.error(f"unexpected {found!r}")


def parse_hyperltl(text: str) -> HyperFormula:
    """Parse a closed HyperLTL formula; raises FormulaError with line/column."""
    return _Parser(text).formula()


def parse_body(text: str) -> Ltl:
    """Parse a quantifier-free body (no closedness check)."""
    p = _Parser(text)
    body = p.iff()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return body


# ---------------------------------------------------------------------------
# Printer

_BIN_SYMBOL = {
    Iff: "<->",
    Implies: "->",
    Or: "|",
    And: "&",
    Until: "U",
    Release: "R",
    WeakUntil: "W",
}
_UN_SYMBOL = {Not: "!", Next: "X", Globally: "G", Eventually: "F"}


def print_body(f: Ltl) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"{f.prop}_{f.var}"
    if isinstance(f, Unary):
        sym = _UN_SYMBOL[type(f)]
        inner = print_body(f.arg)
        if isinstance(f.arg, Binary):
            inner = f"({inner})"
        return f"{sym}{inner}" if sym == "!" else f"{sym} {inner}"
    assert isinstance(f, Binary)
    parts = []
    for child in (f.left, f.right):
        s = print_body(child)
        parts.append(f"({s})" if isinstance(child, Binary) else s)
    return f"{parts[0]} {_BIN_SYMBOL[type(f)]} {parts[1]}"


def print_formula(f: HyperFormula) -> str:
    quants = "".join(f"{q} {v}. " for q, v in f.prefix)
    return quants + print_body(f.body)


# ---------------------------------------------------------------------------
# Normal forms


def to_nnf(f: Ltl, negated: bool = False) -> Ltl:
    """Negation normal form over {atom, !atom, true, false, &, |, X, U, R}.

    Derived operators (F, G, W, ->, <->) are desugared here.
    """
    if isinstance(f, Const):
        return Const(f.value != negated)
    if isinstance(f, Atom):
        return Not(f) if negated else f
    if isinstance(f, Not):
        return to_nnf(f.arg, not negated)
    if isinstance(f, Next):
        return Next(to_nnf(f.arg, negated))
    if isinstance(f, Eventually):
        g = to_nnf(f.arg, negated)
        return Release(FALSE, g) if negated else Until(TRUE, g)
    if isinstance(f, Globally):
        g = to_nnf(f.arg, negated)
        return Until(TRUE, g) if negated else Release(FALSE, g)
    if isinstance(f, And):
        cls = Or if negated else And
        return cls(to_nnf(f.left, negated), to_nnf(f.right, negated))
    if isinstance(f, Or):
        cls = And if negated else Or
        return cls(to_nnf(f.left, negated), to_nnf(f.right, negated))
    if isinstance(f, Implies):
        return to_nnf(Or(Not(f.left), f.right), negated)
    if isinstance(f, Iff):
        a, b = f.left, f.right
        return to_nnf(Or(And(a, b), And(Not(a), Not(b))), negated)
    if isinstance(f, Until):
        cls = Release if negated else Until
        return cls(to_nnf(f.left, negated), to_nnf(f.right, negated))
    if isinstance(f, Release):
        cls = Until if negated else Release
        return cls(to_nnf(f.left, negated), to_nnf(f.right, negated))
    if isinstance(f, WeakUntil):
        # a W b == b R (a | b)
        a, b = f.left, f.right
        return to_nnf(Release(b, Or(a, b)), negated)
    raise TypeError(f"not an LTL node: {f!r}")


def negate(f: HyperFormula) -> HyperFormula:
    """Dual prefix, negated body."""
    flip = {FORALL: EXISTS, EXISTS: FORALL}
    return HyperFormula(tuple((flip[q], v) for q, v in f.prefix), Not(f.body))


def load_formula(path) -> HyperFormula:
    with open(path, encoding="utf-8") as fh:
        return parse_hyperltl(fh.read())

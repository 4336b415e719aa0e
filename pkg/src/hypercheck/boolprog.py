"""A small C-like boolean-program language, exploded to explicit transition systems.

Example::

    var h, l, o;
    while true {
        h := input();
        l := input();
        o := l;
    }
    observe h as h;
    observe l as l;
    observe o as o;

Variables hold integers modulo ``2**bitwidth`` and start at 0. Every
executed statement (assignment, input read, branch test, ``skip``) is one
step of the system; a finished program stutters forever. The label of a
state lists the observed variables that are nonzero; with a bitwidth above
1 each bit gets its own proposition ``<ap><bit>``. The grammar is in
``docs/boolprog.md``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .system import TransitionSystem

DEFAULT_STATE_CAP = 10**6


class ProgramError(ValueError):
    """Syntax or well-formedness error, with a 1-based line and column."""

    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.line = line
        self.col = col


class ExplosionTooLarge(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Expr:
    op: str  # "const", "var", "!", "&", "|", "^", "==", "!="
    args: tuple = ()


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr


@dataclass(frozen=True)
class Input:
    var: str


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple
    orelse: tuple = ()


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple


@dataclass(frozen=True)
class BoolProgram:
    variables: tuple[str, ...]
    body: tuple
    observe: tuple[tuple[str, str], ...] = field(default=())


# ---------------------------------------------------------------------------
# Parser

_TOKEN = re.compile(
    r"\s*(?:(?P<comment>#[^\n]*)|(?P<num>\d+)|(?P<id>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>:=|==|!=|[!&|^(){};,]))"
)
_KEYWORDS = {"var", "while", "if", "else", "input", "observe", "as", "true", "false", "skip"}


def _tokens(text: str):
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:]
            if not rest.strip():
                break
            skip = len(rest) - len(rest.lstrip())
            at = pos + skip
            line += text.count("\n", pos, at)
            col = at - (text.rfind("\n", 0, at) + 1) + 1
            raise ProgramError(f"unexpected character {text[at]!r}", line, col)
        for kind in ("num", "id", "op"):
            val = m.group(kind)
            if val is not None:
                at = m.start(kind)
                line = text.count("\n", 0, at) + 1
                line_start = text.rfind("\n", 0, at) + 1
                out.append((kind, val, line, at - line_start + 1))
        pos = m.end()
    end = len(text.rstrip())
    out.append(("eof", "", text.count("\n", 0, end) + 1, end - (text.rfind("\n", 0, end) + 1) + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0
        self.declared: list[str] = []

    def peek(self):
        return self.toks[self.i]

    def error(self, msg):
        _, _, line, col = self.peek()
        raise ProgramError(msg, line, col)

    def take(self, val=None):
        tok = self.peek()
        if val is not None and tok[1] != val:
            self.error(f"expected {val!r}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def ident(self):
        tok = self.peek()
        if tok[0] != "id" or tok[1] in _KEYWORDS:
            self.error(f"expected identifier, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok[1]

    def var_ref(self):
        tok = self.peek()
        name = self.ident()
        if name not in self.declared:
            raise ProgramError(f"undeclared variable {name!r}", tok[2], tok[3])
        return name

    def program(self) -> BoolProgram:
        while self.peek()[1] == "var":
            self.take()
            while True:
                tok = self.peek()
                name = self.ident()
                if name in self.declared:
                    raise ProgramError(f"variable {name!r} declared twice", tok[2], tok[3])
                self.declared.append(name)
                if self.peek()[1] != ",":
                    break
                self.take()
            self.take(";")
        body = []
        while self.peek()[0] != "eof" and self.peek()[1] != "observe":
            body.append(self.stmt())
        observe = []
        while self.peek()[1] == "observe":
            self.take()
            var = self.var_ref()
            self.take("as")
            ap = self.ident()
            self.take(";")
            observe.append((var, ap))
        if self.peek()[0] != "eof":
            self.error(f"unexpected {self.peek()[1]!r} after observe declarations")
        return BoolProgram(tuple(self.declared), tuple(body), tuple(observe))

    def block(self):
        self.take("{")
        out = []
        while self.peek()[1] != "}":
            if self.peek()[0] == "eof":
                self.error("unterminated block")
            out.append(self.stmt())
        self.take("}")
        return tuple(out)

    def stmt(self):
        tok = self.peek()
        if tok[1] == "while":
            self.take()
            cond = self.expr()
            return While(cond, self.block())
        if tok[1] == "if":
            self.take()
            cond = self.expr()
            then = self.block()
            orelse = ()
            if self.peek()[1] == "else":
                self.take()
                orelse = self.block()
            return If(cond, then, orelse)
        if tok[1] == "skip":
            self.take()
            self.take(";")
            return Skip()
        var = self.var_ref()
        self.take(":=")
        if self.peek()[1] == "input":
            self.take()
            self.take("(")
            self.take(")")
            self.take(";")
            return Input(var)
        e = self.expr()
        self.take(";")
        return Assign(var, e)

    # precedence: ! > == != > & > ^ > |
    def expr(self):
        left = self.xor()
        while self.peek()[1] == "|":
            self.take()
            left = Expr("|", (left, self.xor()))
        return left

    def xor(self):
        left = self.conj()
        while self.peek()[1] == "^":
            self.take()
            left = Expr("^", (left, self.conj()))
        return left

    def conj(self):
        left = self.cmp()
        while self.peek()[1] == "&":
            self.take()
            left = Expr("&", (left, self.cmp()))
        return left

    def cmp(self):
        left = self.unary()
        while self.peek()[1] in ("==", "!="):
            op = self.take()[1]
            left = Expr(op, (left, self.unary()))
        return left

    def unary(self):
        tok = self.peek()
        if tok[1] == "!":
            self.take()
            return Expr("!", (self.unary(),))
        if tok[1] == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if tok[1] in ("true", "false"):
            self.take()
            return Expr("const", (1 if tok[1] == "true" else 0,))
        if tok[0] == "num":
            self.take()
            return Expr("const", (int(tok[1]),))
        return Expr("var", (self.var_ref(),))


def parse_program(text: str) -> BoolProgram:
    return _Parser(text).program()


def load_program(path) -> BoolProgram:
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read())


# ---------------------------------------------------------------------------
# Explosion


def _eval(e: Expr, env: dict, mask: int) -> int:
    op = e.op
    if op == "const":
        return e.args[0] & mask
    if op == "var":
        return env[e.args[0]]
    if op == "!":
        return ~_eval(e.args[0], env, mask) & mask
    a = _eval(e.args[0], env, mask)
    b = _eval(e.args[1], env, mask)
    if op == "&":
        return a & b
    if op == "|":
        return a | b
    if op == "^":
        return a ^ b
    if op == "==":
        return int(a == b)
    return int(a != b)


def _compile(p: BoolProgram):
    """Flatten to instructions ``(kind, payload, next, alt)``; index 0 is the entry."""
    code: list = []

    def emit(kind, payload):
        code.append([kind, payload, None, None])
        return len(code) - 1

    halt = emit("halt", None)

    def block(stmts, cont):
        entry = cont
        for s in reversed(stmts):
            entry = stmt(s, entry)
        return entry

    def stmt(s, cont):
        if isinstance(s, Assign):
            i = emit("assign", (s.var, s.expr))
            code[i][2] = cont
        elif isinstance(s, Input):
            i = emit("input", s.var)
            code[i][2] = cont
        elif isinstance(s, Skip):
            i = emit("skip", None)
            code[i][2] = cont
        elif isinstance(s, If):
            i = emit("branch", s.cond)
            code[i][2] = block(s.then, cont)
            code[i][3] = block(s.orelse, cont)
        else:
            i = emit("branch", s.cond)
            code[i][2] = block(s.body, i)
            code[i][3] = cont
        return i

    entry = block(p.body, halt)
    return code, entry


def explode_program(p: BoolProgram, bitwidth: int = 1, cap: int = DEFAULT_STATE_CAP) -> TransitionSystem:
    """Reachable (program point, valuation) graph of ``p``."""
    if bitwidth < 1:
        raise ValueError("bitwidth must be positive")
    mask = (1 << bitwidth) - 1
    code, entry = _compile(p)
    names = p.variables
    observed = {}
    for var, ap in p.observe:
        if bitwidth == 1:
            observed.setdefault(var, []).append([(0, ap)])
        else:
            observed.setdefault(var, []).append([(b, f"{ap}{b}") for b in range(bitwidth)])
    aps = []
    for var, ap in p.observe:
        for group in observed[var]:
            for _, name in group:
                if name not in aps:
                    aps.append(name)

    def label(vals):
        env = dict(zip(names, vals))
        out = set()
        for var, groups in observed.items():
            for group in groups:
                for bit, name in group:
                    if env[var] >> bit & 1:
                        out.add(name)
        return out

    def successors(state):
        pc, vals = state
        kind, payload, nxt, alt = code[pc]
        if kind == "halt":
            return [state]
        if kind == "skip":
            return [(nxt, vals)]
        env = dict(zip(names, vals))
        if kind == "branch":
            return [(nxt if _eval(payload, env, mask) else alt, vals)]
        if kind == "assign":
            var, e = payload
            env[var] = _eval(e, env, mask)
            return [(nxt, tuple(env[v] for v in names))]
        k = names.index(payload)
        return [(nxt, vals[:k] + (v,) + vals[k + 1 :]) for v in range(mask + 1)]

    start = (entry, (0,) * len(names))
    index = {start: 0}
    order = [start]
    edges: dict[int, list[int]] = {}
    i = 0
    while i < len(order):
        s = order[i]
        out = []
        for t in successors(s):
            if t not in index:
                if len(index) >= cap:
                    raise ExplosionTooLarge(f"explosion too large: more than {cap} states")
                index[t] = len(order)
                order.append(t)
            out.append(index[t])
        edges[i] = out
        i += 1
    labels = {i: label(s[1]) for i, s in enumerate(order)}
    return TransitionSystem.build(aps, [0], edges, labels)


__all__ = [
    "BoolProgram",
    "DEFAULT_STATE_CAP",
    "ExplosionTooLarge",
    "ProgramError",
    "explode_program",
    "load_program",
    "parse_program",
]

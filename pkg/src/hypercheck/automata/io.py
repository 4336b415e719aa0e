"""Text formats for automata: an HOA subset ("hoa-like") and explicit-letter BA."""

from __future__ import annotations

import re

from .nba import NBA, AutomatonError, Cube, Letter, LassoWord, build_nba, sort_props

# 2^16 explicit letters; the symbolic alphabets of real instances reach 18 props
BA_MAX_PROPS = 16


class AlphabetTooLarge(AutomatonError):
    def __init__(self, nprops: int):
        super().__init__(
            f"alphabet too large for an explicit format: {nprops} propositions "
            f"(2^{nprops} letters, limit 2^{BA_MAX_PROPS})"
        )


# ---------------------------------------------------------------------------
# hoa-like


def _dnf_str(cubes: list[Cube]) -> str:
    if any(p == 0 and n == 0 for p, n in cubes):
        return "t"
    terms = []
    for p, n in cubes:
        lits = []
        i = 0
        m = p | n
        while m >> i:
            if p >> i & 1:
                lits.append(str(i))
            elif n >> i & 1:
                lits.append(f"!{i}")
            i += 1
        terms.append("(" + " & ".join(lits) + ")")
    return " | ".join(terms)


def export_hoa(a: NBA) -> str:
    lines = [
        "HOA-ish: v1",
        f"States: {a.num_states}",
        "Start: " + " ".join(str(q) for q in sorted(a.initial)),
        f"AP: {len(a.props)}" + "".join(f' "{ap}@{i}"' for ap, i in a.props),
        f"Arity: {a.arity}",
        "Acceptance: Buchi",
        "--BODY--",
    ]
    for q in range(a.num_states):
        lines.append(f"State: {q}" + (" {acc}" if q in a.accepting else ""))
        for dst, cubes in sorted(a.guards(q).items()):
            lines.append(f"[{_dnf_str(cubes)}] {dst}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


_CUBE_SPLIT = re.compile(r"\s*\|\s*")


def _parse_dnf(text: str, nprops: int) -> list[Cube]:
    text = text.strip()
    if text == "t":
        return [(0, 0)]
    if text == "f":
        return []
    cubes = []
    for term in _CUBE_SPLIT.split(text):
        term = term.strip()
        if term.startswith("(") and term.endswith(")"):
            term = term[1:-1]
        p = n = 0
        for lit in filter(None, (x.strip() for x in term.split("&"))):
            neg = lit.startswith("!")
            idx = int(lit[1:] if neg else lit)
            if not 0 <= idx < nprops:
                raise AutomatonError(f"AP index {idx} out of range")
            if neg:
                n |= 1 << idx
            else:
                p |= 1 << idx
        cubes.append((p, n))
    return cubes


def parse_hoa(text: str) -> NBA:
    header: dict[str, str] = {}
    lines = [l.strip() for l in text.splitlines() if l.strip()]
    try:
        body_at = lines.index("--BODY--")
    except ValueError:
        raise AutomatonError("missing --BODY--") from None
    for line in lines[:body_at]:
        key, _, val = line.partition(":")
        header[key.strip()] = val.strip()
    if header.get("HOA-ish") != "v1":
        raise AutomatonError("not a HOA-ish v1 file")
    ap_field = header.get("AP", "0")
    nprops = int(ap_field.split()[0])
    names = re.findall(r'"([^"]*)"', ap_field)
    if len(names) != nprops:
        raise AutomatonError("AP count does not match AP names")
    props = []
    for name in names:
        ap, _, idx = name.rpartition("@")
        props.append((ap, int(idx)))
    if tuple(props) != sort_props(props):
        raise AutomatonError("AP list must be in canonical (index, name) order")
    arity = int(header.get("Arity", max((i for _, i in props), default=-1) + 1))
    nstates = int(header["States"])
    start = [int(x) for x in header.get("Start", "").split()]
    accepting = []
    edges = []
    cur = None
    for line in lines[body_at + 1 :]:
        if line == "--END--":
            break
        if line.startswith("State:"):
            parts = line[6:].split()
            cur = int(parts[0])
            if "{acc}" in line:
                accepting.append(cur)
            continue
        m = re.fullmatch(r"\[(.*)\]\s*(\d+)", line)
        if not m or cur is None:
            raise AutomatonError(f"cannot parse edge line {line!r}")
        dst = int(m.group(2))
        for cube in _parse_dnf(m.group(1), nprops):
            edges.append((cur, cube, dst))
    raw = [[] for _ in range(nstates)]
    for src, (p, n), dst in edges:
        if not (0 <= src < nstates and 0 <= dst < nstates):
            raise AutomatonError("state id out of range")
        if not p & n:
            raw[src].append((p, n, dst))
    return NBA(arity, tuple(props), frozenset(start), frozenset(accepting), tuple(map(tuple, raw)))


# ---------------------------------------------------------------------------
# BA (explicit letters)


def letter_name(mask: int) -> str:
    return f"l{mask}"


def _letters_of(cube: Cube, nprops: int):
    p, n = cube
    free = [i for i in range(nprops) if not (p | n) >> i & 1]
    for k in range(1 << len(free)):
        m = p
        for j, i in enumerate(free):
            if k >> j & 1:
                m |= 1 << i
        yield m


def export_ba(a: NBA) -> str:
    """Explicit-alphabet BA text; letter ``l<m>`` is the full valuation with bitmask m."""
    k = len(a.props)
    if k > BA_MAX_PROPS:
        raise AlphabetTooLarge(k)
    init = sorted(a.initial)
    lines = []
    trans = []
    n = a.num_states
    if len(init) == 1:
        start = init[0]
    else:
        # BA has a single initial state: add a fresh one copying initial edges
        start = n
        for q in init:
            for p, m, d in a.edges[q]:
                for letter in _letters_of((p, m), k):
                    trans.append(f"{letter_name(letter)},[{start}]->[{d}]")
    if init:
        lines.append(f"[{start}]")
    for q in range(n):
        for p, m, d in a.edges[q]:
            for letter in _letters_of((p, m), k):
                trans.append(f"{letter_name(letter)},[{q}]->[{d}]")
    lines.extend(dict.fromkeys(trans))
    lines.extend(f"[{q}]" for q in sorted(a.accepting))
    return "\n".join(lines) + "\n"


_BA_TRANS = re.compile(r"^([^,\s]+)\s*,\s*\[?([^\]\s]+)\]?\s*->\s*\[?([^\]\s]+)\]?$")


def parse_ba(text: str):
    """Parse BA text into ``(initial, transitions, accepting)`` with raw symbol/state names."""
    lines = [l.strip() for l in text.splitlines() if l.strip() and not l.startswith("#")]
    initial = []
    trans = []
    accepting = []
    seen_trans = False
    for line in lines:
        m = _BA_TRANS.match(line)
        if m:
            seen_trans = True
            trans.append((m.group(2), m.group(1), m.group(3)))
            continue
        name = line.strip("[]")
        if seen_trans:
            accepting.append(name)
        else:
            initial.append(name)
    if not initial and trans:
        initial.append(trans[0][0])
    if not trans and len(initial) >= 1:
        # no transitions: every listed state is both initial and accepting
        accepting = list(initial)
    return initial, trans, accepting


def ba_pair_to_nba(text_a: str, text_b: str):
    """Encode two BA automata over a shared explicit alphabet as symbolic NBAs.

    Each symbol becomes one exact cube over ``ceil(log2 #symbols)`` binary props.
    Returns ``(A, B, symbols)`` where ``symbols[i]`` names the letter with bitmask i.
    """
    parsed = [parse_ba(text_a), parse_ba(text_b)]
    symbols = sorted({s for _, trans, _ in parsed for _, s, _ in trans})
    width = max(1, (len(symbols) - 1).bit_length())
    props = sort_props((f"b{i}", 0) for i in range(width))
    bit_of = {p: i for i, p in enumerate(props)}
    full = (1 << width) - 1
    code = {}
    for value, sym in enumerate(symbols):
        pos = 0
        for i in range(width):
            if value >> i & 1:
                pos |= 1 << bit_of[(f"b{i}", 0)]
        code[sym] = (pos, full & ~pos)
    out = []
    for initial, trans, accepting in parsed:
        edges = [(("s", src), code[sym], ("s", dst)) for src, sym, dst in trans]
        out.append(
            build_nba(1, props, [("s", q) for q in initial], [("s", q) for q in accepting], edges)
        )
    decode = {}
    for sym, (pos, _) in code.items():
        decode[pos] = sym
    return out[0], out[1], decode


def decode_ba_word(word: LassoWord, props, decode: dict[int, str]):
    """Letters of an arity-1 word over the binary encoding back to BA symbol names."""
    from .nba import letter_mask

    names = lambda letters: [decode[letter_mask(props, l)] for l in letters]  # noqa: E731
    return names(word.stem), names(word.loop)


def format_cex(stem: list[str], loop: list[str]) -> str:
    return "CEX: " + " ".join(stem) + "$" + " ".join(loop)


def parse_cex(line: str) -> tuple[list[str], list[str]]:
    body = line.split(":", 1)[1]
    stem, _, loop = body.partition("$")
    return stem.split(), loop.split()


def letter_from_mask(props, mask: int, arity: int) -> Letter:
    sets = [set() for _ in range(arity)]
    for i, (ap, idx) in enumerate(props):
        if mask >> i & 1:
            sets[idx].add(ap)
    return tuple(frozenset(s) for s in sets)

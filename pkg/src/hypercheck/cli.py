"""Command-line interface.

The first token on stdout is always one of HOLDS, FAILS, TIMEOUT or ERROR
for ``check``. Exit codes: 0 holds (or success), 1 fails, 2 usage or parse
error, 3 resource failure (size cap, timeout, external tool, oracle
disagreement).
"""

from __future__ import annotations

import argparse
import sys

from . import bench
from . import formula as F
from .automata.nba import SizeCapExceeded, format_lasso
from .boolprog import ExplosionTooLarge, ProgramError, explode_program, load_program
from .budget import CheckTimeout
from .checker import STRATEGIES, check, stats_report
from .inclusion import ExternalToolError, ba_inclusion_tool
from .oracle.explicit import OracleBoundsError, OracleLimitError, decide_naive
from .system import SystemFormatError, load_system, print_system

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"ERROR: {message}")
        raise SystemExit(EXIT_USAGE)


def _engine(text: str) -> str:
    if text in ("complement", "antichain") or text.startswith("external:"):
        return text
    raise argparse.ArgumentTypeError("engine must be complement, antichain or external:CMD")


def _positive(kind):
    def conv(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text}")
        return v

    return conv


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypercheck", description="Explicit-state HyperLTL model checker.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="decide whether a system satisfies a formula")
    c.add_argument("--system", required=True, help="system file")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--formula", help="formula file")
    g.add_argument("--formula-inline", help="formula text")
    c.add_argument("--engine", type=_engine, default="complement",
                   help="complement, antichain or external:CMD with {A} and {B} placeholders")
    c.add_argument("--strategy", choices=STRATEGIES, default="auto")
    c.add_argument("--witness", action="store_true", help="print a witness or counterexample lasso")
    c.add_argument("--oracle", action="store_true", help="recheck with the reference decision procedure")
    c.add_argument("--timeout", type=_positive(float), help="wall-clock limit in seconds")
    c.add_argument("--cap", type=_positive(int), default=10**6, help="automaton size cap")
    c.add_argument("--stats", choices=("text", "csv"), help="print per-stage statistics")

    e = sub.add_parser("explode", help="explode a boolean program into a system file")
    e.add_argument("--program", required=True)
    e.add_argument("--bitwidth", type=_positive(int), default=1)
    e.add_argument("--out", required=True)
    e.add_argument("--cap", type=_positive(int), default=10**6)

    gen = sub.add_parser("gen", help="random systems and formulas")
    gsub = gen.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    gs = gsub.add_parser("system")
    gs.add_argument("--n", type=_positive(int), required=True, help="number of states")
    dens = gs.add_mutually_exclusive_group()
    dens.add_argument("--p", type=float, help="edge probability")
    dens.add_argument("--outdegree", type=float, help="expected outdegree k (p = k/n)")
    gs.add_argument("--aps", type=int, default=2)
    gs.add_argument("--seed", type=int, default=0)
    gs.add_argument("--out")
    gf = gsub.add_parser("formula")
    gf.add_argument("--pattern", required=True, help="quantifier pattern such as aea")
    gf.add_argument("--size", type=_positive(int), required=True, help="body size")
    gf.add_argument("--aps", type=int, default=2)
    gf.add_argument("--seed", type=int, default=0)
    gf.add_argument("--out")

    s = sub.add_parser("sweep", help="benchmark sweep from a key=value config")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="CSV file (default stdout)")
    s.add_argument("--jobs", type=_positive(int), default=1)

    x = sub.add_parser("export-inclusion", help="write the inclusion query of a forall-leading check")
    x.add_argument("--system", required=True)
    x.add_argument("--formula", required=True)
    x.add_argument("--out-prefix", required=True)

    b = sub.add_parser("ba-include", help="BA inclusion tool: prints INCLUDED or NOT INCLUDED and CEX")
    b.add_argument("a")
    b.add_argument("b")
    return p


def _read_formula(args) -> F.HyperFormula:
    if args.formula_inline is not None:
        return F.parse_hyperltl(args.formula_inline)
    return F.load_formula(args.formula)


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_check(args) -> int:
    t = load_system(args.system)
    f = _read_formula(args)
    v = check(t, f, engine=args.engine, strategy=args.strategy, cap=args.cap, timeout=args.timeout,
              want_witness=args.witness)
    code = EXIT_HOLDS if v.holds else EXIT_FAILS
    if args.oracle:
        try:
            ref = decide_naive(t, f)
        except OracleBoundsError as e:
            print(f"oracle: skipped ({e})", file=sys.stderr)
        else:
            if ref != v.holds:
                print(f"ERROR: oracle disagrees (checker {v.holds}, oracle {ref})")
                return EXIT_RESOURCE
            print("oracle: agrees", file=sys.stderr)
    print("HOLDS" if v.holds else "FAILS")
    if args.witness:
        if v.witness is None:
            print("WITNESS: none")
        else:
            print(f"WITNESS: {v.witness_role} {' '.join(v.witness_vars)}")
            print(format_lasso(v.witness))
    if args.stats:
        sys.stdout.write(stats_report(v, args.stats))
    return code


def _cmd_explode(args) -> int:
    t = explode_program(load_program(args.program), args.bitwidth, args.cap)
    _write(args.out, print_system(t))
    print(f"{t.num_states} states, {t.num_edges} edges", file=sys.stderr)
    return 0


def _cmd_gen(args) -> int:
    if args.kind == "system":
        if args.p is not None:
            p = args.p
        else:
            p = min(1.0, (args.outdegree if args.outdegree is not None else 3.0) / args.n)
        _write(args.out, print_system(bench.gen_system(args.n, p, args.aps, args.seed)))
    else:
        f = bench.gen_formula(args.pattern, args.size, args.aps, args.seed)
        _write(args.out, F.print_formula(f) + "\n")
    return 0


def _cmd_sweep(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        cfg = bench.parse_sweep_config(fh.read())
    if args.out is None:
        rows = bench.sweep(cfg, sys.stdout, args.jobs)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            rows = bench.sweep(cfg, fh, args.jobs)
    for cell in bench.summarize(rows):
        median = "-" if cell["median_ms"] is None else f"{cell['median_ms']:.1f} ms"
        print(f"{cell['pattern']} n={cell['n']} p={cell['p']} size={cell['body_size']}: "
              f"{cell['success_rate']:.0%} of {cell['samples']} within timeout, median {median}",
              file=sys.stderr)
    return 0


def _cmd_export(args) -> int:
    t = load_system(args.system)
    f = F.load_formula(args.formula)
    out = bench.export_inclusion_instance(t, f, args.out_prefix)
    for path in out["files"]:
        print(path)
    for note in out["notices"]:
        print(f"notice: {note}", file=sys.stderr)
    return 0


def _cmd_ba_include(args) -> int:
    with open(args.a, encoding="utf-8") as fa, open(args.b, encoding="utf-8") as fb:
        sys.stdout.write(ba_inclusion_tool(fa.read(), fb.read()))
    return 0


_COMMANDS = {
    "check": _cmd_check,
    "explode": _cmd_explode,
    "gen": _cmd_gen,
    "sweep": _cmd_sweep,
    "export-inclusion": _cmd_export,
    "ba-include": _cmd_ba_include,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except CheckTimeout:
        print("TIMEOUT")
        return EXIT_RESOURCE
    except (SizeCapExceeded, ExplosionTooLarge, ExternalToolError, OracleLimitError, MemoryError) as e:
        print(f"ERROR: {type(e).__name__}: {e}")
        return EXIT_RESOURCE
    except (F.FormulaError, SystemFormatError, ProgramError, ValueError, OSError) as e:
        print(f"ERROR: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

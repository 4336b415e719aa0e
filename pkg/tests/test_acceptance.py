"""Acceptance criteria 1-9, each reporting one PASS/FAIL line in the terminal summary."""

import io
import random
import time

import pytest
from helpers import GNI, PROGRAMS, body_and_word, load_corpus, nba_and_words

from hypercheck import formula as F
from hypercheck.automata import io as aio
from hypercheck.automata.complement import complement
from hypercheck.automata.ltl2nba import ltl_to_nba
from hypercheck.automata.nba import emptiness, member
from hypercheck.automata.ops import intersect
from hypercheck.bench import SweepConfig, gen_formula, gen_system, gen_system_stats, random_nba, sweep
from hypercheck.boolprog import explode_program, load_program
from hypercheck.checker import check
from hypercheck.inclusion import include_antichain, include_complement
from hypercheck.oracle.explicit import decide_naive
from hypercheck.oracle.lasso_eval import eval_zip
from hypercheck.system import parse_system, print_system

SAFE = ["safe_copy_low", "safe_constant", "safe_one_time_pad", "safe_balanced_branch", "safe_low_parity"]
LEAKY = ["leaky_copy_high", "leaky_branch", "leaky_masked_with_low"]


@pytest.fixture
def report(request):
    def record(number, ok, detail):
        request.config.acceptance_lines.append(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail

    return record


def test_criterion_1_gni_verdict_corpus(report):
    f = F.load_formula(GNI)
    t0 = time.perf_counter()
    wrong = []
    for name in SAFE + LEAKY:
        t = explode_program(load_program(PROGRAMS / f"{name}.bp"))
        if check(t, f).holds != name.startswith("safe"):
            wrong.append(name)
    elapsed = time.perf_counter() - t0
    report(1, not wrong and elapsed <= 10,
           f"{len(SAFE)} safe hold, {len(LEAKY)} leaky fail, wrong={wrong}, {elapsed:.2f} s <= 10 s")


def test_criterion_2_oracle_equivalence(report):
    corpus = load_corpus()
    counts = {}
    for item, _, _ in corpus:
        counts[item["pattern"]] = counts.get(item["pattern"], 0) + 1
    t0 = time.perf_counter()
    bad = []
    for item, t, f in corpus:
        got = check(t, f).holds
        if got != decide_naive(t, f) or got != item["holds"]:
            bad.append(item["id"])
    elapsed = time.perf_counter() - t0
    patterns_ok = all(counts.get(p, 0) >= 30 for p in ("ae", "ea", "aea", "eae"))
    report(2, len(corpus) >= 300 and patterns_ok and not bad and elapsed <= 300,
           f"{len(corpus)} instances, disagreements={bad}, {elapsed:.1f} s <= 300 s")


def test_criterion_3_inclusion_matches_pure_abv(report):
    subset = [(item, t, f) for item, t, f in load_corpus() if f.prefix[0][0] == F.FORALL]
    bad = []
    holds = 0
    for item, t, f in subset:
        a = check(t, f, strategy="inclusion").holds
        b = check(t, f, strategy="pure-abv").holds
        holds += a
        if a != b:
            bad.append(item["id"])
    report(3, not bad and len(subset) > 0,
           f"{len(subset)} forall-leading instances ({holds} hold), disagreements={bad}")


def test_criterion_4_translation_fidelity(report):
    t0 = time.perf_counter()
    bad = []
    for seed in range(1000):
        body, variables, w = body_and_word(seed)
        if member(ltl_to_nba(body, variables), w) != eval_zip(body, variables, w):
            bad.append(seed)
    elapsed = time.perf_counter() - t0
    report(4, not bad and elapsed <= 120, f"1000 pairs, disagreements={bad}, {elapsed:.1f} s <= 120 s")


def test_criterion_5_complementation_soundness(report):
    xor_bad = []
    nonempty = []
    for seed in range(200):
        a, words = nba_and_words(seed, states=5, words=50)
        c = complement(a)
        if any(member(a, w) == member(c, w) for w in words):
            xor_bad.append(seed)
        if not emptiness(intersect(a, c)).empty:
            nonempty.append(seed)
    report(5, not xor_bad and not nonempty,
           f"200 NBAs x 50 words, xor failures={xor_bad}, nonempty a & not a={nonempty}")


def test_criterion_6_inclusion_engines_agree(report):
    bad = []
    invalid = []
    excluded = 0
    for seed in range(300):
        rng = random.Random(seed)
        a = random_nba(rng, states=rng.randint(1, 5))
        b = random_nba(rng, states=rng.randint(1, 5))
        x = include_complement(a, b)
        y = include_antichain(a, b)
        if x.included != y.included:
            bad.append(seed)
        for out in (x, y):
            if not out.included:
                excluded += 1
                cx = out.counterexample
                if cx is None or not member(a, cx) or member(b, cx):
                    invalid.append(seed)
    report(6, not bad and not invalid,
           f"300 pairs, disagreements={bad}, {excluded} counterexamples, invalid={invalid}")


def test_criterion_7_multi_alternation_feasibility(report):
    patterns = ("ae", "ea", "aea", "eae", "aeae", "eaea", "aeaea", "eaeae")
    cfg = SweepConfig(sizes=(20,), outdegrees=(5.0,), patterns=patterns, body_sizes=(10,),
                      samples=10, timeout=30.0)
    rows = sweep(cfg, io.StringIO(), jobs=4)
    rates = {}
    count_bad = []
    for r in rows:
        ok = r["status"] == "ok"
        done, total = rates.get(r["pattern"], (0, 0))
        rates[r["pattern"]] = (done + ok, total + 1)
        if ok:
            alternations = len(r["pattern"]) - 1
            recorded = len([x for x in r["complement_ms_list"].split(";") if x])
            if recorded != alternations - 1:
                count_bad.append((r["pattern"], r["seed"], recorded))
    good_cells = [p for p, (d, n) in rates.items() if d >= 0.8 * n]
    summary = " ".join(f"{p}:{d}/{n}" for p, (d, n) in rates.items())
    report(7, len(good_cells) >= 0.8 * len(rates) and not count_bad,
           f"cells at >= 80% within 30 s: {len(good_cells)}/{len(rates)} [{summary}], count mismatches={count_bad}")


def test_criterion_8_generator_outdegree(report):
    means = [gen_system_stats(1000, 10 / 1000, 2, seed)[1].pre_repair_edges / 1000 for seed in range(5)]
    report(8, all(abs(m - 10) <= 1 for m in means), "pre-repair mean outdegrees " +
           ", ".join(f"{m:.2f}" for m in means))


def test_criterion_9_format_round_trips(report):
    sys_bad = []
    formula_bad = []
    hoa_bad = []
    for seed in range(100):
        rng = random.Random(seed)
        t = gen_system(rng.randint(1, 12), rng.random(), rng.randint(0, 4), seed)
        if parse_system(print_system(t)) != t:
            sys_bad.append(seed)
        pattern = "".join(rng.choice("ae") for _ in range(rng.randint(1, 4)))
        f = gen_formula(pattern, rng.randint(1, 20), 3, seed)
        if F.parse_hyperltl(F.print_formula(f)) != f:
            formula_bad.append(seed)
        a, words = nba_and_words(seed, words=20, arity=rng.randint(1, 2))
        b = aio.parse_hoa(aio.export_hoa(a))
        if b.props != a.props or any(member(a, w) != member(b, w) for w in words):
            hoa_bad.append(seed)
    report(9, not (sys_bad or formula_bad or hoa_bad),
           f"100 seeds each, failures: systems={sys_bad} formulas={formula_bad} hoa={hoa_bad}")

import random

import pytest
from helpers import CORPUS, body_and_word, load_corpus, seeds
from hypothesis import given

from hypercheck import formula as F
from hypercheck.automata.nba import LassoWord
from hypercheck.bench import gen_formula, gen_system
from hypercheck.oracle import explicit as X
from hypercheck.oracle.lasso_eval import LassoAssignment, eval_body, eval_zip
from hypercheck.system import TransitionSystem, parse_system

ONE_EMPTY = parse_system("aps: a\ninit: 0\nstate 0 {}\n-> 0\n")


def test_until_on_lasso():
    w = LassoWord.of([[{"a"}], [{"a"}]], [[{"b"}]])
    assert eval_zip(F.parse_body("a_p U b_p"), ["p"], w) is True


def test_globally_on_alternating_loop():
    w = LassoWord.of([], [[{"a"}], [set()]])
    assert eval_zip(F.parse_body("G a_p"), ["p"], w) is False


def test_positions_past_the_word_fold_into_the_loop():
    w = LassoWord.of([[set()]], [[{"a"}], [set()]])
    asg = LassoAssignment({"p": w})
    body = F.parse_body("a_p")
    assert [eval_body(body, asg, i) for i in range(6)] == [False, True, False, True, False, True]


def test_unbound_variable():
    w = LassoWord.of([], [[set()]])
    with pytest.raises(F.FormulaError):
        eval_body(F.parse_body("a_q"), LassoAssignment({"p": w}))


@given(seeds)
def test_eval_invariant_under_unrolling(seed):
    body, variables, w = body_and_word(seed)
    base = eval_zip(body, variables, w)
    assert eval_zip(body, variables, w.unrolled(loop_copies=2)) == base
    assert eval_zip(body, variables, w.unrolled(stem_extra=1)) == base


def test_decide_naive_trivial():
    assert X.decide_naive(ONE_EMPTY, F.parse_hyperltl("exists p. G !a_p")) is True
    assert X.decide_naive(ONE_EMPTY, F.parse_hyperltl("exists p. F a_p")) is False


def test_decide_naive_bounds():
    big = gen_system(9, 0.3, 1, 0)
    with pytest.raises(X.OracleBoundsError):
        X.decide_naive(big, F.parse_hyperltl("forall p. a_p"))
    with pytest.raises(X.OracleBoundsError):
        X.decide_naive(ONE_EMPTY, F.parse_hyperltl("forall p. forall q. forall r. forall s. a_p"))
    with pytest.raises(X.OracleBoundsError):
        X.decide_naive(ONE_EMPTY, F.parse_hyperltl("forall p. " + " & ".join(["a_p"] * 6)))


def test_frozen_corpus_reproduces():
    for item, t, f in load_corpus():
        assert X.decide_naive(t, f) == item["holds"], item["id"]


def test_decide_naive_deterministic_and_ap_order_independent():
    rng = random.Random(3)
    for i in range(40):
        t = gen_system(rng.randint(1, 4), 0.4, 2, i)
        f = gen_formula(rng.choice(["ae", "ea", "aea"]), rng.randint(1, 6), 2, i)
        r = X.decide_naive(t, f)
        assert X.decide_naive(t, f) == r
        swapped = TransitionSystem(tuple(reversed(t.ap)), t.initial, t.succ, t.labels)
        assert X.decide_naive(swapped, f) == r


def _random_explicit(rng, states, nletters=4):
    delta = [[tuple(sorted({d for d in range(states) if rng.random() < 0.3})) for _ in range(nletters)]
             for _ in range(states)]
    acc = frozenset(q for q in range(states) if rng.random() < 0.4)
    return X.Explicit(nletters, (0,), acc, delta)


def test_rank_and_safra_complements_agree():
    rng = random.Random(2)
    for _ in range(150):
        a = _random_explicit(rng, rng.randint(1, 4))
        rank = X.complement_explicit(a)
        safra = X.complement_safra(a)
        for _ in range(30):
            stem = [rng.randrange(4) for _ in range(rng.randint(0, 3))]
            loop = [rng.randrange(4) for _ in range(rng.randint(1, 3))]
            inside = X.accepts(a, stem, loop)
            assert X.accepts(rank, stem, loop) != inside
            assert X.accepts(safra, stem, loop) != inside


def test_prune_preserves_language():
    rng = random.Random(8)
    for _ in range(100):
        a = _random_explicit(rng, rng.randint(1, 6))
        p = X.prune(a)
        assert p.size <= a.size
        for _ in range(20):
            stem = [rng.randrange(4) for _ in range(rng.randint(0, 3))]
            loop = [rng.randrange(4) for _ in range(rng.randint(1, 3))]
            assert X.accepts(p, stem, loop) == X.accepts(a, stem, loop)


def test_corpus_file_exists():
    assert CORPUS.exists()


def _letter_index(letter, aps):
    return sum(1 << (i * len(aps) + j) for i, s in enumerate(letter) for j, ap in enumerate(aps) if ap in s)


@given(seeds)
def test_oracle_translation_matches_evaluator(seed):
    body, variables, w = body_and_word(seed, max_size=8)
    aps = ["a", "b"]
    a = X.ltl_explicit(body, variables, aps)
    stem = [_letter_index(l, aps) for l in w.stem]
    loop = [_letter_index(l, aps) for l in w.loop]
    assert X.accepts(a, stem, loop) == eval_zip(body, variables, w)

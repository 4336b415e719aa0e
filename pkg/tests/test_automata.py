import random

import pytest
from helpers import body_and_word, nba_and_words, seeds
from hypothesis import given

from hypercheck import formula as F
from hypercheck.automata import io as aio
from hypercheck.automata.complement import complement
from hypercheck.automata.ltl2nba import ltl_to_nba
from hypercheck.automata.nba import (
    LassoWord,
    build_nba,
    cube_sat,
    emptiness,
    empty_nba,
    member,
    universal_nba,
    zip_words,
)
from hypercheck.automata.ops import exists_step, intersect, self_composition
from hypercheck.bench import gen_system, random_body, random_lasso, random_nba
from hypercheck.oracle.brute import exists_bounded, nested_dfs_nonempty, system_lassos
from hypercheck.oracle.lasso_eval import eval_zip
from hypercheck.system import parse_system

A_ONLY = LassoWord.of([], [[{"a"}]])
A_THEN_EMPTY = LassoWord.of([], [[{"a"}], [set()]])
ONE_STATE = "aps: a\ninit: 0\nstate 0 {%s}\n-> 0\n"


def nba(text, order=("p",)):
    return ltl_to_nba(F.parse_body(text), list(order))


def guards_ok(a):
    return all(cube_sat((p, n)) for out in a.edges for p, n, _ in out)


# -- translation


def test_true_is_universal():
    a = nba("true")
    assert a.num_states == 1 and a.accepting == {0}
    assert a.edges[0] == ((0, 0, 0),)
    rng = random.Random(0)
    assert all(member(a, random_lasso(1, "ab", rng)) for _ in range(50))


def test_globally_frozen_examples():
    # expected values computed by the lasso evaluator
    body = F.parse_body("G a_p")
    assert eval_zip(body, ["p"], A_ONLY) is True
    assert eval_zip(body, ["p"], A_THEN_EMPTY) is False
    a = nba("G a_p")
    assert member(a, A_ONLY) and not member(a, A_THEN_EMPTY)


@given(seeds)
def test_translation_matches_evaluator(seed):
    body, variables, w = body_and_word(seed)
    a = ltl_to_nba(body, variables)
    assert guards_ok(a)
    assert member(a, w) == eval_zip(body, variables, w)


# -- existential step


def test_exists_step_examples():
    a = nba("G a_p")
    assert not emptiness(exists_step(a, parse_system(ONE_STATE % "a"))).empty
    assert emptiness(exists_step(a, parse_system(ONE_STATE % ""))).empty


def test_exists_step_vs_bounded_search_50():
    # an accepting lasso of the product has stem and loop of at most |S|·|Q|
    # letters; instances are kept where that bound makes enumeration cheap
    done = 0
    seed = 0
    outcomes = set()
    while done < 50:
        seed += 1
        rng = random.Random(seed)
        t = gen_system(rng.randint(1, 3), 0.5, 2, seed)
        body = random_body(rng.randint(1, 6), ["a", "b"], ["p"], rng)
        a = ltl_to_nba(body, ["p"])
        bound = t.num_states * a.num_states
        if bound > 4:
            continue
        f = F.HyperFormula(((F.EXISTS, "p"),), body)
        nonempty = not emptiness(exists_step(a, t)).empty
        assert nonempty == exists_bounded(t, f, 2 * bound), (seed, body)
        outcomes.add(nonempty)
        done += 1
    assert outcomes == {True, False}


def test_exists_step_is_sound_for_sampled_assignments():
    rng = random.Random(7)
    for _ in range(40):
        t = gen_system(rng.randint(1, 4), 0.4, 2, rng.randrange(10**6))
        body = random_body(rng.randint(1, 8), ["a", "b"], ["p1", "p2"], rng)
        a1 = exists_step(ltl_to_nba(body, ["p1", "p2"]), t)
        words = list(system_lassos(t, 4))[:12]
        for w1 in words:
            if any(eval_zip(body, ["p1", "p2"], zip_words([w1, w2])) for w2 in words):
                assert member(a1, w1)


# -- complement, intersection


def test_complement_of_universal_is_empty():
    assert emptiness(complement(universal_nba(1))).empty


def test_complement_of_empty_is_universal():
    c = complement(empty_nba(1, [("a", 0)]))
    rng = random.Random(1)
    assert all(member(c, random_lasso(1, "ab", rng)) for _ in range(50))


@given(seeds)
def test_complement_xor(seed):
    a, words = nba_and_words(seed, words=20)
    c = complement(a)
    assert guards_ok(c)
    for w in words:
        assert member(a, w) != member(c, w)


@pytest.mark.parametrize("method", ["parity", "rank"])
def test_complement_methods_xor(method):
    for seed in range(60):
        a, words = nba_and_words(seed, states=4, words=20)
        c = complement(a, method=method)
        assert all(member(a, w) != member(c, w) for w in words), seed


def test_breakpoint_on_weak_automata():
    # translations of safety bodies are weak
    for text in ["G a_p", "a_p U b_p", "G (a_p -> X b_p)", "F G a_p"]:
        a = nba(text)
        c = complement(a, method="breakpoint") if text != "F G a_p" else complement(a)
        rng = random.Random(2)
        for _ in range(40):
            w = random_lasso(1, "ab", rng)
            assert member(a, w) != member(c, w)


def test_double_complement_preserves_membership():
    for seed in range(40):
        a, words = nba_and_words(seed, states=4, words=20)
        cc = complement(complement(a))
        assert all(member(a, w) == member(cc, w) for w in words)


def test_intersect_identities():
    for seed in range(40):
        a, words = nba_and_words(seed, words=20)
        ia = intersect(a, universal_nba(1, a.props))
        assert all(member(ia, w) == member(a, w) for w in words)
        assert emptiness(intersect(empty_nba(1), a)).empty
        assert emptiness(intersect(a, complement(a))).empty


# -- emptiness and membership


def test_emptiness_examples():
    no_acc = build_nba(1, [], [0], [], [(0, (0, 0), 0)])
    assert emptiness(no_acc).empty
    res = emptiness(universal_nba(1))
    assert not res.empty
    assert res.witness.stem == () and res.witness.loop == ((frozenset(),),)


def test_witness_is_member_500():
    count = 0
    for seed in range(2000):
        a, _ = nba_and_words(seed, words=0, arity=2)
        res = emptiness(a)
        if not res.empty:
            assert member(a, res.witness)
            count += 1
        if count == 500:
            break
    assert count == 500


def test_emptiness_vs_nested_dfs_200():
    for seed in range(200):
        rng = random.Random(seed)
        a = random_nba(rng, states=rng.randint(1, 6), density=0.3)
        assert emptiness(a).empty != nested_dfs_nonempty(a), seed


def test_member_invariant_under_unrolling_500():
    rng = random.Random(3)
    for _ in range(500):
        a = random_nba(rng, states=rng.randint(1, 4))
        w = random_lasso(1, "ab", rng)
        assert member(a, w) == member(a, w.unrolled(stem_extra=1, loop_copies=2))


# -- self-composition


def test_self_composition_n1_is_trace_set():
    t = parse_system("aps: a b\ninit: 0\nstate 0 {a}\n-> 0 1\nstate 1 {b}\n-> 0\n")
    sc = self_composition(t, 1)
    assert sc.accepting == set(range(sc.num_states))
    for w in system_lassos(t, 5):
        assert member(sc, w)
    # {a, b} labels no state
    assert not member(sc, LassoWord.of([], [[{"a", "b"}]]))
    assert not member(sc, LassoWord.of([[{"b"}]], [[{"a"}]]))


def test_self_composition_size_bound():
    t = gen_system(2, 0.7, 1, 5)
    assert self_composition(t, 2).num_states <= 4


def test_zip_property_200():
    rng = random.Random(4)
    for _ in range(200):
        t = gen_system(rng.randint(1, 4), 0.4, 2, rng.randrange(10**6))
        sc1, sc2 = self_composition(t, 1), self_composition(t, 2)
        pool = list(system_lassos(t, 3)) + [random_lasso(1, "ab", rng) for _ in range(3)]
        w1, w2 = rng.choice(pool), rng.choice(pool)
        assert member(sc2, zip_words([w1, w2])) == (member(sc1, w1) and member(sc1, w2))


# -- export


def test_ba_export_universal_enumerates_letters():
    props = [("a", 0), ("b", 0), ("a", 1)]
    text = aio.export_ba(universal_nba(2, props))
    lines = [l for l in text.splitlines() if "->" in l]
    assert len(lines) == 2 ** 3


def test_ba_alphabet_too_large():
    props = [(f"x{i}", i % 2) for i in range(18)]
    with pytest.raises(aio.AlphabetTooLarge, match="alphabet too large"):
        aio.export_ba(universal_nba(2, props))


@given(seeds)
def test_hoa_roundtrip_membership(seed):
    a, words = nba_and_words(seed, words=10, arity=2)
    b = aio.parse_hoa(aio.export_hoa(a))
    assert b.props == a.props and b.arity == a.arity
    assert all(member(a, w) == member(b, w) for w in words)


def test_hoa_rejects_garbage():
    with pytest.raises(aio.AutomatonError):
        aio.parse_hoa("States: 1\n")

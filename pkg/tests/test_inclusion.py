import random
import sys

import pytest
from helpers import seeds
from hypothesis import given

from hypercheck import formula as F
from hypercheck.automata.ltl2nba import ltl_to_nba
from hypercheck.automata.nba import empty_nba, member, universal_nba
from hypercheck.automata.ops import union
from hypercheck.bench import random_nba
from hypercheck.inclusion import (
    ExternalToolError,
    include,
    include_antichain,
    include_complement,
    include_external,
)
from hypercheck.oracle.lasso_eval import eval_zip

SELF = f"{sys.executable} -m hypercheck ba-include {{A}} {{B}}"


def pair(seed, states=5):
    rng = random.Random(seed)
    a = random_nba(rng, states=rng.randint(1, states))
    b = random_nba(rng, states=rng.randint(1, states))
    return a, b


def valid(out, a, b):
    if out.included:
        return out.counterexample is None
    cx = out.counterexample
    return cx is not None and member(a, cx) and not member(b, cx)


@given(seeds)
def test_reflexive(seed):
    a, _ = pair(seed)
    assert include_complement(a, a).included
    assert include_antichain(a, a).included


def test_empty_and_universal():
    rng = random.Random(0)
    for _ in range(20):
        a = random_nba(rng)
        assert include_complement(empty_nba(1), a).included
        assert include_antichain(a, universal_nba(1)).included
    out = include_antichain(universal_nba(1), empty_nba(1))
    assert not out.included and out.counterexample is not None


def test_eventually_not_in_globally():
    a = ltl_to_nba(F.parse_body("F a_p"), ["p"])
    b = ltl_to_nba(F.parse_body("G a_p"), ["p"])
    for engine in (include_complement, include_antichain):
        out = engine(a, b)
        assert not out.included
        cx = out.counterexample
        assert eval_zip(F.parse_body("F a_p & !G a_p"), ["p"], cx)


@given(seeds)
def test_engines_agree_with_valid_counterexamples(seed):
    a, b = pair(seed)
    x = include_complement(a, b)
    y = include_antichain(a, b)
    assert x.included == y.included
    assert valid(x, a, b) and valid(y, a, b)


def test_superset_by_union_always_included_50():
    rng = random.Random(5)
    for _ in range(50):
        a = random_nba(rng, states=rng.randint(1, 4))
        b = random_nba(rng, states=rng.randint(1, 4))
        u = union(a, b)
        assert include_complement(a, u).included
        assert include_antichain(b, u).included


def test_antichain_prunes():
    rng = random.Random(9)
    pruned = 0
    for _ in range(50):
        a, b = random_nba(rng, states=5), random_nba(rng, states=5)
        pruned += include_antichain(a, b).stats["pruned"]
    assert pruned > 0


def test_external_self_hosted_agrees_50():
    for seed in range(50):
        a, b = pair(seed, states=4)
        ext = include_external(a, b, SELF, timeout=60)
        assert ext.included == include_complement(a, b).included, seed
        assert valid(ext, a, b) or (not ext.included and ext.counterexample is None)


def test_external_nonzero_exit_is_error():
    a, b = pair(1)
    with pytest.raises(ExternalToolError):
        include_external(a, b, "false {A} {B}")


def test_external_garbage_output_is_error():
    a, b = pair(1)
    with pytest.raises(ExternalToolError):
        include_external(a, b, "echo maybe {A} {B}")


def test_external_bad_counterexample_rejected():
    a = universal_nba(1, [("a", 0)])
    b = empty_nba(1, [("a", 0)])
    with pytest.raises(ExternalToolError, match="malformed|not in"):
        include_external(a, b, "echo 'NOT INCLUDED'; echo 'CEX: $zz' # {A} {B}")


def test_external_timeout_is_error():
    a, b = pair(1)
    with pytest.raises(ExternalToolError, match="timed out"):
        include_external(a, b, "sleep 5 # {A} {B}", timeout=0.2)


def test_external_template_needs_placeholders():
    a, b = pair(1)
    with pytest.raises(ExternalToolError):
        include(a, b, "external", command="true")


def test_external_alphabet_too_large_before_spawn(tmp_path):
    from hypercheck.automata.io import AlphabetTooLarge

    props = [(f"x{i}", 0) for i in range(18)]
    a = universal_nba(1, props)
    marker = tmp_path / "ran"
    with pytest.raises(AlphabetTooLarge, match="alphabet too large"):
        include_external(a, a, f"touch {marker} {{A}} {{B}}")
    assert not marker.exists()

import pytest
from helpers import GNI, PROGRAMS

from hypercheck import formula as F
from hypercheck.boolprog import ExplosionTooLarge, ProgramError, explode_program, load_program, parse_program
from hypercheck.checker import check
from hypercheck.oracle.brute import system_lassos
from hypercheck.oracle.explicit import decide_naive
from hypercheck.system import print_system

ECHO = """
var x, o;
while true { x := input(); o := x; }
observe o as o;
"""


def test_echo_program_explodes_small():
    t = explode_program(parse_program(ECHO), 1)
    assert t.num_states <= 8
    assert t.ap == ("o",)


def test_echo_program_allows_every_output_sequence():
    # o follows the input with a fixed delay: every o pattern in the loop phase is possible
    t = explode_program(parse_program(ECHO), 1)
    f = F.parse_hyperltl("forall p. exists q. X X X X (G (o_q <-> !o_p))")
    assert check(t, f).holds


def test_halting_program_stutters():
    t = explode_program(parse_program("var o; o := true; o := false;\nobserve o as o;"), 1)
    assert all(t.succ)
    assert check(t, F.parse_hyperltl("forall p. F G !o_p")).holds
    for w in system_lassos(t, 6):
        assert all("o" not in letter[0] for letter in w.loop)


def test_deterministic():
    p = load_program(PROGRAMS / "safe_one_time_pad.bp")
    assert print_system(explode_program(p, 1)) == print_system(explode_program(p, 1))


def test_bitwidth_props():
    p = parse_program("var x; while true { x := input(); }\nobserve x as x;")
    t = explode_program(p, 2)
    assert t.ap == ("x0", "x1")
    assert {frozenset(l) for l in t.labels} == {frozenset(), frozenset({"x0"}), frozenset({"x1"}),
                                                frozenset({"x0", "x1"})}


def test_if_else_and_operators():
    p = parse_program("""
        var a, b, o;
        a := 1; b := a ^ 1;
        if a == 1 & b != 1 { o := !b; } else { o := false; }
        observe o as o;
    """)
    t = explode_program(p, 1)
    assert check(t, F.parse_hyperltl("forall p. F G o_p")).holds


def test_cap():
    p = parse_program("var a, b, c; while true { a := input(); b := input(); c := input(); }")
    with pytest.raises(ExplosionTooLarge, match="explosion too large"):
        explode_program(p, 2, cap=10)


@pytest.mark.parametrize(
    "text, where",
    [
        ("var x; y := 1;", (1, 8)),
        ("var x;\nx := ;", (2, 6)),
        ("var x, x;", (1, 8)),
        ("var x; while x { x := 0;", (1, 25)),
        ("var x; x := 1 $", (1, 15)),
    ],
)
def test_errors_have_positions(text, where):
    with pytest.raises(ProgramError) as e:
        parse_program(text)
    assert (e.value.line, e.value.col) == where


SAFE = ["safe_copy_low", "safe_constant", "safe_one_time_pad", "safe_balanced_branch", "safe_low_parity"]
LEAKY = ["leaky_copy_high", "leaky_branch", "leaky_masked_with_low"]


@pytest.mark.parametrize("name", SAFE + LEAKY)
def test_gni_matches_reference(name):
    t = explode_program(load_program(PROGRAMS / f"{name}.bp"), 1)
    f = F.load_formula(GNI)
    expected = name in SAFE
    assert decide_naive(t, f, max_states=100, max_body=20) is expected
    assert check(t, f).holds is expected

import subprocess
import sys

import pytest
from helpers import GNI, PROGRAMS, SAMPLES

from hypercheck.cli import main
from hypercheck.system import load_system

EMPTY = str(SAMPLES / "systems" / "one_state_empty.sys")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def safe_sys(tmp_path, capsys):
    path = tmp_path / "safe.sys"
    assert run(capsys, "explode", "--program", PROGRAMS / "safe_copy_low.bp", "--out", path)[0] == 0
    return path


@pytest.fixture
def leaky_sys(tmp_path, capsys):
    path = tmp_path / "leaky.sys"
    assert run(capsys, "explode", "--program", PROGRAMS / "leaky_copy_high.bp", "--out", path)[0] == 0
    return path


def test_holds_and_fails_exit_codes(capsys):
    code, out, _ = run(capsys, "check", "--system", EMPTY, "--formula-inline", "forall p. G !a_p")
    assert (code, out.split()[0]) == (0, "HOLDS")
    code, out, _ = run(capsys, "check", "--system", EMPTY, "--formula-inline", "exists p. F a_p")
    assert (code, out.split()[0]) == (1, "FAILS")


def test_gni_on_programs(capsys, safe_sys, leaky_sys):
    assert run(capsys, "check", "--system", safe_sys, "--formula", GNI)[0] == 0
    code, out, _ = run(capsys, "check", "--system", leaky_sys, "--formula", GNI, "--engine", "antichain")
    assert code == 1 and out.startswith("FAILS")


def test_parse_error_is_usage_error(capsys):
    code, out, _ = run(capsys, "check", "--system", EMPTY, "--formula-inline", "forall p. G (a_p")
    assert code == 2 and out.startswith("ERROR")
    code, out, _ = run(capsys, "check", "--system", EMPTY, "--formula-inline", "forall p. G zz_p")
    assert code == 2 and out.startswith("ERROR")
    assert run(capsys, "check", "--system", EMPTY)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check", "--system", "/nonexistent.sys", "--formula-inline", "forall p. a_p")[0] == 2


def test_timeout_is_resource_failure(capsys, tmp_path):
    path = tmp_path / "big.sys"
    assert run(capsys, "gen", "system", "--n", 20, "--outdegree", 5, "--seed", 1, "--out", path)[0] == 0
    fpath = tmp_path / "f.hltl"
    assert run(capsys, "gen", "formula", "--pattern", "aeae", "--size", 10, "--seed", 1, "--out", fpath)[0] == 0
    code, out, _ = run(capsys, "check", "--system", path, "--formula", fpath, "--timeout", "0.000001")
    assert (code, out.strip()) == (3, "TIMEOUT")


def test_size_cap_is_resource_failure(capsys, safe_sys):
    code, out, _ = run(capsys, "check", "--system", safe_sys, "--formula", GNI, "--cap", 5)
    assert code == 3 and out.startswith("ERROR")


def test_oracle_flag(capsys):
    code, out, err = run(capsys, "check", "--system", EMPTY, "--formula-inline",
                         "forall p. exists q. G (a_p <-> a_q)", "--oracle")
    assert code == 0 and "oracle: agrees" in err


def test_witness_output(capsys, leaky_sys):
    code, out, _ = run(capsys, "check", "--system", leaky_sys, "--formula", GNI, "--witness")
    lines = out.splitlines()
    assert code == 1 and lines[0] == "FAILS"
    assert lines[1] == "WITNESS: universal-counterexample p1 p2"
    assert "LOOP" in lines[2]
    code, out, _ = run(capsys, "check", "--system", EMPTY, "--formula-inline", "forall p. G !a_p", "--witness")
    assert out.splitlines()[1] == "WITNESS: none"


def test_stats_output(capsys, safe_sys):
    code, out, _ = run(capsys, "check", "--system", safe_sys, "--formula", GNI, "--stats", "csv")
    assert code == 0 and "stage,states,edges,seconds" in out
    code, out, _ = run(capsys, "check", "--system", safe_sys, "--formula", GNI, "--stats", "text",
                       "--strategy", "pure-abv")
    assert "complementations: 1" in out


def test_explode_writes_loadable_system(capsys, tmp_path):
    path = tmp_path / "p.sys"
    code, _, err = run(capsys, "explode", "--program", PROGRAMS / "leaky_branch.bp", "--bitwidth", 2, "--out", path)
    assert code == 0 and "states" in err
    assert load_system(path).num_states > 1
    bad = tmp_path / "bad.bp"
    bad.write_text("var x; x := y;\n")
    code, out, _ = run(capsys, "explode", "--program", bad, "--out", tmp_path / "q.sys")
    assert code == 2 and "undeclared" in out


def test_gen_is_deterministic(capsys):
    a = run(capsys, "gen", "system", "--n", 8, "--p", 0.3, "--seed", 5)[1]
    b = run(capsys, "gen", "system", "--n", 8, "--p", 0.3, "--seed", 5)[1]
    assert a == b and a
    f = run(capsys, "gen", "formula", "--pattern", "ae", "--size", 4, "--seed", 2)[1]
    assert f.startswith("forall p1. exists p2.")


def test_sweep_command(capsys, tmp_path):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("sizes = 5\npatterns = ae\nbody_sizes = 4\nsamples = 2\n")
    out = tmp_path / "out.csv"
    code, _, err = run(capsys, "sweep", "--config", cfg, "--out", out)
    assert code == 0 and "100% of 2" in err
    assert len(out.read_text().splitlines()) == 3


def test_export_and_ba_include(capsys, tmp_path, leaky_sys):
    prefix = tmp_path / "gni"
    code, out, _ = run(capsys, "export-inclusion", "--system", leaky_sys, "--formula", GNI, "--out-prefix", prefix)
    assert code == 0 and len(out.split()) == 4
    code, out, _ = run(capsys, "ba-include", f"{prefix}.sys.ba", f"{prefix}.prop.ba")
    assert code == 0 and out.splitlines()[0] == "NOT INCLUDED"


def test_module_entry_point(safe_sys):
    proc = subprocess.run(
        [sys.executable, "-m", "hypercheck", "check", "--system", str(safe_sys), "--formula", str(GNI)],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("HOLDS")

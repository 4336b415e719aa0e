import csv
import io

import pytest
from helpers import GNI, PROGRAMS, seeds
from hypothesis import given

from hypercheck import formula as F
from hypercheck.automata import io as aio
from hypercheck.bench import (
    CSV_FIELDS,
    SweepConfig,
    export_inclusion_instance,
    gen_formula,
    gen_system,
    gen_system_stats,
    parse_sweep_config,
    run_instance,
    summarize,
    sweep,
)
from hypercheck.boolprog import explode_program, load_program
from hypercheck.checker import check
from hypercheck.inclusion import include_complement


def test_gen_system_deterministic():
    assert gen_system(40, 0.1, 3, 7) == gen_system(40, 0.1, 3, 7)
    assert gen_system(40, 0.1, 3, 7) != gen_system(40, 0.1, 3, 8)


def test_probability_one_is_complete():
    t, stats = gen_system_stats(12, 1.0, 2, 0)
    assert stats.pre_repair_edges == 144 and stats.total_edges_added == 0
    assert all(t.succ[s] == tuple(range(12)) for s in range(12))


def test_mean_outdegree_before_repair():
    _, stats = gen_system_stats(1000, 10 / 1000, 2, 3)
    assert abs(stats.pre_repair_edges / 1000 - 10) <= 1.0


@given(seeds)
def test_generated_systems_are_total_and_connected(seed):
    t = gen_system(1 + seed % 15, (seed % 7) / 10, 2, seed)
    assert all(t.succ[s] for s in range(t.num_states))
    seen, stack = set(t.initial), list(t.initial)
    while stack:
        for d in t.succ[stack.pop()]:
            if d not in seen:
                seen.add(d)
                stack.append(d)
    assert len(seen) == t.num_states


def test_formula_round_trip_500_seeds():
    for seed in range(500):
        f = gen_formula(["ae", "eae", "a", "aaee"][seed % 4], 1 + seed % 20, 3, seed)
        assert F.parse_hyperltl(F.print_formula(f)) == f, seed
        assert F.size(f.body) == 1 + seed % 20
        assert not F.free_vars(f.body) - set(f.variables)


def test_body_size_one():
    for seed in range(50):
        body = gen_formula("a", 1, 2, seed).body
        assert isinstance(body, (F.Atom, F.Const))


def test_pattern_prefix():
    f = gen_formula("ae", 5, 2, 0)
    assert [q for q, _ in f.prefix] == [F.FORALL, F.EXISTS]
    with pytest.raises(ValueError):
        gen_formula("ax", 5, 2, 0)


def test_sweep_config_parsing():
    cfg = parse_sweep_config("sizes = 10, 20\npatterns = ae aea  # comment\nsamples = 3\ndensities = 0.5\n")
    assert cfg.sizes == (10, 20) and cfg.patterns == ("ae", "aea") and cfg.samples == 3
    assert [c[2] for c in cfg.cells()] == [0.5, 0.5, 0.5, 0.5]
    assert [c[2] for c in SweepConfig(sizes=(20,), outdegrees=(5.0,)).cells()] == [0.25]
    for bad in ("sizes 10", "colour = red", "samples = 1 2", "patterns = aq"):
        with pytest.raises(ValueError):
            parse_sweep_config(bad)


def test_sweep_smoke_cell():
    cfg = SweepConfig(sizes=(30,), outdegrees=(10.0,), patterns=("ae",), body_sizes=(20,), samples=20)
    buf = io.StringIO()
    rows = sweep(cfg, buf, jobs=2)
    parsed = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert len(parsed) == 20 and tuple(parsed[0]) == CSV_FIELDS
    assert [r["seed"] for r in parsed] == [str(i) for i in range(20)]
    (cell,) = summarize(rows)
    assert cell["samples"] == 20 and 0 <= cell["success_rate"] <= 1


def test_sweep_is_deterministic_apart_from_timings():
    cfg = SweepConfig(sizes=(8,), patterns=("ae", "ea"), body_sizes=(6,), samples=4)
    keep = [k for k in CSV_FIELDS if k not in ("wall_ms", "complement_ms_list")]
    a = sweep(cfg, io.StringIO(), jobs=1)
    b = sweep(cfg, io.StringIO(), jobs=3)
    assert [[r[k] for k in keep] for r in a] == [[r[k] for k in keep] for r in b]


def test_timeout_rows_are_not_verdicts():
    row = run_instance("aea", 20, 0.25, 10, 0, timeout=1e-6)
    assert row["verdict"] == "TIMEOUT" and row["status"] == "timeout"
    (cell,) = summarize([row])
    assert cell["success_rate"] == 0 and cell["median_ms"] is None


@pytest.mark.parametrize("pattern", ["ae", "aea", "aeae", "aeaea"])
def test_alternation_columns_match_stats(pattern):
    for seed in range(3):
        row = run_instance(pattern, 6, 0.5, 6, seed, timeout=60)
        assert row["status"] == "ok"
        t = gen_system(6, 0.5, 2, seed)
        f = gen_formula(pattern, 6, 2, seed)
        v = check(t, f)
        times = [x for x in row["complement_ms_list"].split(";") if x]
        assert len(times) == v.stats.complement_count == len(pattern) - 2
        assert row["stage_sizes"] == ";".join(str(s.states) for s in v.stats.stages)


def test_export_round_trip_verdict(tmp_path):
    f = F.load_formula(GNI)
    for name in ("safe_copy_low", "leaky_copy_high"):
        t = explode_program(load_program(PROGRAMS / f"{name}.bp"))
        out = export_inclusion_instance(t, f, str(tmp_path / name))
        assert len(out["files"]) == 4 and not out["notices"]
        texts = {}
        for path in out["files"]:
            with open(path, encoding="utf-8") as fh:
                texts[path.rsplit(name, 1)[1]] = fh.read()
        expected = check(t, f).holds
        sys_a, prop_a = aio.parse_hoa(texts[".sys.hoa"]), aio.parse_hoa(texts[".prop.hoa"])
        assert include_complement(sys_a, prop_a).included == expected
        a, b, _ = aio.ba_pair_to_nba(texts[".sys.ba"], texts[".prop.ba"])
        assert include_complement(a, b).included == expected


def test_export_requires_forall_prefix(tmp_path):
    t = gen_system(3, 0.5, 2, 0)
    with pytest.raises(ValueError, match="forall"):
        export_inclusion_instance(t, F.parse_hyperltl("exists p. forall q. G (a_p <-> a_q)"), str(tmp_path / "x"))


def test_export_wide_alphabet_skips_ba(tmp_path):
    t = gen_system(3, 0.5, 9, 0)
    f = F.parse_hyperltl("forall p. forall q. G (a_p <-> a_q) & F (i_p | i_q)")
    out = export_inclusion_instance(t, f, str(tmp_path / "wide"))
    assert [p.rsplit(".", 2)[-2:] for p in out["files"]] == [["sys", "hoa"], ["prop", "hoa"]]
    assert out["notices"] and "alphabet too large" in out["notices"][0]

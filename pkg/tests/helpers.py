"""Shared generators and paths for the test suite."""

from __future__ import annotations

import json
import random
from pathlib import Path

from hypothesis import strategies as st

from hypercheck import formula as F
from hypercheck.bench import gen_formula, gen_system, random_body, random_lasso, random_nba
from hypercheck.system import parse_system

ROOT = Path(__file__).resolve().parents[1]
SAMPLES = ROOT / "samples"
PROGRAMS = SAMPLES / "programs"
GNI = SAMPLES / "formulas" / "gni.hltl"
CORPUS = Path(__file__).resolve().parent / "data" / "oracle_corpus.json"

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def load_corpus():
    with open(CORPUS, encoding="utf-8") as fh:
        data = json.load(fh)
    out = []
    for item in data["instances"]:
        out.append((item, parse_system(item["system"]), F.parse_hyperltl(item["formula"])))
    return out


def body_and_word(seed: int, max_size: int = 10, arity: int = 2, aps=("a", "b")):
    """Random body over ``p1..p<arity>`` and a random lasso word of that arity."""
    rng = random.Random(seed)
    variables = [f"p{i + 1}" for i in range(arity)]
    body = random_body(rng.randint(1, max_size), aps, variables, rng)
    return body, variables, random_lasso(arity, aps, rng)


def small_instance(seed: int, pattern: str, max_states: int = 5, max_body: int = 8):
    rng = random.Random(seed)
    t = gen_system(rng.randint(1, max_states), rng.choice([0.2, 0.4, 0.6]), 2, rng.randrange(10**6))
    f = gen_formula(pattern, rng.randint(1, max_body), 2, rng.randrange(10**6))
    return t, f


def nba_and_words(seed: int, states: int = 5, words: int = 50, arity: int = 1):
    rng = random.Random(seed)
    a = random_nba(rng, states=rng.randint(1, states), arity=arity)
    return a, [random_lasso(arity, ("a", "b"), rng) for _ in range(words)]

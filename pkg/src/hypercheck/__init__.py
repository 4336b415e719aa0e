"""Explicit-state HyperLTL model checking by automata-based quantifier elimination."""

from .checker import CheckStats, NoWitness, Verdict, check, extract_witness, inclusion_instance
from .formula import HyperFormula, parse_hyperltl
from .system import TransitionSystem, load_system, parse_system

__version__ = "0.1.0"

__all__ = [
    "CheckStats",
    "HyperFormula",
    "NoWitness",
    "TransitionSystem",
    "Verdict",
    "check",
    "extract_witness",
    "inclusion_instance",
    "load_system",
    "parse_hyperltl",
    "parse_system",
]

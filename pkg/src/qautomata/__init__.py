"""Automata, step languages and regular expressions valued in finite orthomodular lattices."""

from .classical import ClassicalDFA, ClassicalNFA, dfa_equivalent
from .documents import dump, load, load_lattice
from .errors import (
    AlphabetMismatchError,
    DocumentError,
    LatticeAxiomError,
    LatticeMismatchError,
    ParseError,
    QAutomataError,
    ResourceCapError,
    UnknownSymbolError,
)
from .oml import LValue, OrthomodularLattice, build_standard, validate
from .qfa import LVDFA, LVFA, LVFAEps, determinize, eps_to_dfa, evaluate
from .qlang import MooreMachine, StepLanguage, equivalent, lvdfa_to_step
from .qregex import QRegex, compile, denote, extract, parse

__all__ = [
    "AlphabetMismatchError",
    "ClassicalDFA",
    "ClassicalNFA",
    "DocumentError",
    "LVDFA",
    "LVFA",
    "LVFAEps",
    "LValue",
    "LatticeAxiomError",
    "LatticeMismatchError",
    "MooreMachine",
    "OrthomodularLattice",
    "ParseError",
    "QAutomataError",
    "QRegex",
    "ResourceCapError",
    "StepLanguage",
    "UnknownSymbolError",
    "build_standard",
    "compile",
    "denote",
    "determinize",
    "dfa_equivalent",
    "dump",
    "eps_to_dfa",
    "equivalent",
    "evaluate",
    "extract",
    "load",
    "load_lattice",
    "lvdfa_to_step",
    "parse",
    "validate",
]

"""Seeded random instances for property testing."""

from __future__ import annotations

import random
from itertools import product

from .classical import EPSILON, ClassicalDFA, ClassicalNFA, Concat, Empty, Eps, Star, Sym, Union
from .oml import LValue, OrthomodularLattice
from .qfa import LVDFA, LVFA, LVFAEps
from .qlang import StepLanguage
from .qregex import QRegex, Scalar


def words(alphabet, max_len: int):
    """Every word up to ``max_len``, shortest first."""
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


def _value(rng: random.Random, lat: OrthomodularLattice, zero_weight: float) -> int:
    if rng.random() < zero_weight:
        return lat.bottom
    return rng.randrange(len(lat.elements))


def _states(rng, max_states, min_states=1):
    return [f"s{i}" for i in range(rng.randint(min_states, max_states))]


def random_lvfa(rng: random.Random, lat: OrthomodularLattice, alphabet=("a", "b"),
                max_states: int = 4, zero_weight: float = 0.5, epsilon: bool = False) -> LVFAEps:
    states = _states(rng, max_states)
    symbols = list(alphabet) + ([EPSILON] if epsilon else [])
    delta = {}
    for p in states:
        for s in symbols:
            for q in states:
                weight = zero_weight + (0.15 if s == EPSILON else 0.0)
                v = _value(rng, lat, min(weight, 0.95))
                if v != lat.bottom:
                    delta[(p, s, q)] = v
    initial = {q: _value(rng, lat, zero_weight) for q in states}
    final = {q: _value(rng, lat, zero_weight) for q in states}
    if all(v == lat.bottom for v in initial.values()):
        initial[states[0]] = lat.top
    cls = LVFAEps if epsilon else LVFA
    return cls(lat, states, alphabet, delta, initial, final)


def random_lvdfa(rng: random.Random, lat: OrthomodularLattice, alphabet=("a", "b"),
                 max_states: int = 4, min_states: int = 1) -> LVDFA:
    states = _states(rng, max_states, min_states)
    delta = {p: {s: rng.choice(states) for s in alphabet} for p in states}
    final = {q: _value(rng, lat, 0.3) for q in states}
    return LVDFA(lat, states, alphabet, delta, states[0], final)


def random_nfa(rng: random.Random, alphabet=("a", "b"), max_states: int = 4,
               density: float = 0.35) -> ClassicalNFA:
    states = _states(rng, max_states)
    transitions = {(p, s, q) for p in states for s in alphabet for q in states
                   if rng.random() < density}
    initial = {q for q in states if rng.random() < 0.4} or {states[0]}
    accepting = {q for q in states if rng.random() < 0.4}
    return ClassicalNFA(states, alphabet, transitions, initial, accepting)


def crisp_lvfa(nfa: ClassicalNFA, lat: OrthomodularLattice) -> LVFA:
    """The classical machine with every present datum set to top."""
    top = lat.top
    delta = {t: top for t in nfa.transitions}
    return LVFA(lat, sorted(nfa.states), nfa.alphabet, delta,
                {q: top for q in nfa.initial}, {q: top for q in nfa.accepting})


def random_dfa(rng: random.Random, alphabet=("a", "b"), max_states: int = 3) -> ClassicalDFA:
    states = [str(i) for i in range(rng.randint(1, max_states))]
    delta = {p: {s: rng.choice(states) for s in alphabet} for p in states}
    accepting = {q for q in states if rng.random() < 0.5}
    return ClassicalDFA(states, alphabet, delta, states[0], accepting)


def random_step(rng: random.Random, lat: OrthomodularLattice, alphabet=("a", "b"),
                max_components: int = 3, max_states: int = 3) -> StepLanguage:
    nonzero = [i for i in range(len(lat.elements)) if i != lat.bottom]
    comps = [(rng.choice(nonzero), random_dfa(rng, alphabet, max_states))
             for _ in range(rng.randint(0, max_components))]
    return StepLanguage(lat, alphabet, comps)


def random_expression(rng: random.Random, lat: OrthomodularLattice, alphabet=("a", "b"),
                      depth: int = 4) -> QRegex:
    def go(d):
        if d == 0 or rng.random() < 0.25:
            r = rng.random()
            if r < 0.8:
                return Sym(rng.choice(alphabet))
            return Eps() if r < 0.93 else Empty()
        kind = rng.choice(("union", "concat", "star", "scalar"))
        if kind == "union":
            return Union(go(d - 1), go(d - 1))
        if kind == "concat":
            return Concat(go(d - 1), go(d - 1))
        if kind == "star":
            return Star(go(d - 1))
        return Scalar(LValue(lat, rng.randrange(len(lat.elements))), go(d - 1))

    return QRegex(go(depth), lat, tuple(alphabet))

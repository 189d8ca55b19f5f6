"""Quantum regular languages as step languages and Moore machines.

A step language is a finite join ``k1·1_L1 ∨ ... ∨ km·1_Lm`` of lattice
constants times characteristic functions of classical regular languages.
Moore machines (a DFA with a lattice-valued output per state) are the
canonical form used for equivalence, cuts and levels.

Several operations (intersection, scalar product, complement, concatenation,
star) distribute values over components.  That is only sound when the
component languages are pairwise disjoint, because the lattice need not be
distributive; those operations bring their operands into disjoint form first.
"""

from __future__ import annotations

import itertools
from collections import deque
from functools import cached_property
from typing import Iterable, Mapping

from .classical import (
    EPSILON,
    ClassicalDFA,
    ClassicalNFA,
    Equivalence,
    determinize_classical,
    dfa_complement,
    dfa_product,
    is_empty,
    nfa_concat,
    refine_partition,
    subset_construction,
    trim,
    universal_dfa,
)
from .errors import AlphabetMismatchError, LatticeMismatchError, ResourceCapError
from .oml import LValue, OrthomodularLattice
from .qfa import LVDFA, LVFA, _check_word

DEFAULT_STAR_COMPONENT_CAP = 8
DEFAULT_ORACLE_BOUND = 6


class StepLanguage:
    """``⋁ k_i · 1_{L_i}`` with nonzero constants and classical DFAs.

    Zero-valued components are dropped.  ``disjoint`` is computed from the
    component languages, never taken on trust.
    """

    def __init__(self, lattice: OrthomodularLattice, alphabet, components: Iterable = ()):
        self.lattice = lattice
        self.alphabet = tuple(alphabet)
        comps = []
        for value, dfa in components:
            if set(dfa.alphabet) != set(self.alphabet):
                raise AlphabetMismatchError(
                    f"component alphabet {dfa.alphabet} differs from {self.alphabet}")
            k = lattice.index(value)
            if k != lattice.bottom:
                comps.append((k, dfa))
        self.components = comps

    @cached_property
    def disjoint(self) -> bool:
        for (_, x), (_, y) in itertools.combinations(self.components, 2):
            if not is_empty(dfa_product(x, y, "intersect")):
                return False
        return True

    def value_index(self, word) -> int:
        word = _check_word(self, word)
        lat = self.lattice
        return lat.join_all(k for k, dfa in self.components if dfa.accepts(word))

    def evaluate(self, word) -> LValue:
        return LValue(self.lattice, self.value_index(word))

    def __call__(self, word) -> LValue:
        return self.evaluate(word)

    def values(self) -> list[LValue]:
        return [LValue(self.lattice, k) for k, _ in self.components]

    def __repr__(self):
        return (f"<StepLanguage {len(self.components)} components over {self.alphabet} "
                f"in {self.lattice.name!r}>")


class MooreMachine:
    """Classical DFA skeleton plus a lattice value for each state."""

    def __init__(self, lattice: OrthomodularLattice, dfa: ClassicalDFA, output: Mapping):
        self.lattice = lattice
        self.dfa = dfa
        self.alphabet = dfa.alphabet
        self.output = {q: lattice.index(output.get(q, lattice.bottom)) for q in dfa.states}

    def value_index(self, word) -> int:
        return self.output[self.dfa.run(_check_word(self, word))]

    def evaluate(self, word) -> LValue:
        return LValue(self.lattice, self.value_index(word))

    def to_lvdfa(self) -> LVDFA:
        return LVDFA(self.lattice, self.dfa.states, self.alphabet, self.dfa.delta,
                     self.dfa.start, self.output)

    @classmethod
    def from_lvdfa(cls, D: LVDFA) -> MooreMachine:
        return cls(D.lattice, D.skeleton(), {q: D.final_value(q) for q in D.states})

    def __repr__(self):
        return f"<MooreMachine {len(self.dfa.states)} states in {self.lattice.name!r}>"


def _check_compatible(A, B):
    if A.lattice != B.lattice:
        raise LatticeMismatchError(
            f"languages over different lattices: {A.lattice.name!r} vs {B.lattice.name!r}")
    if set(A.alphabet) != set(B.alphabet):
        raise AlphabetMismatchError(f"alphabets differ: {A.alphabet} vs {B.alphabet}")


# --------------------------------------------------- step <-> deterministic

def lvdfa_to_step(D: LVDFA | MooreMachine) -> StepLanguage:
    """One component per nonzero output value, accepting that value's states.

    The components are pairwise disjoint since each word ends in one state.
    """
    if isinstance(D, LVDFA):
        D = MooreMachine.from_lvdfa(D)
    lat = D.lattice
    skeleton = trim(D.dfa)
    # trim renumbers in BFS order; recover outputs by replaying access words
    access = _access_words(skeleton)
    output = {q: D.output[D.dfa.run(access[q])] for q in skeleton.states}
    groups: dict[int, list] = {}
    for q in skeleton.states:
        if output[q] != lat.bottom:
            groups.setdefault(output[q], []).append(q)
    comps = []
    for k in sorted(groups, key=lat.name_of):
        comps.append((k, ClassicalDFA(skeleton.states, skeleton.alphabet, skeleton.delta,
                                      skeleton.start, groups[k])))
    return StepLanguage(lat, D.alphabet, comps)


def _access_words(d: ClassicalDFA) -> dict:
    words = {d.start: ()}
    queue = deque([d.start])
    while queue:
        q = queue.popleft()
        for s in d.alphabet:
            p = d.delta[q][s]
            if p not in words:
                words[p] = words[q] + (s,)
                queue.append(p)
    return words


def step_to_lvfa(S: StepLanguage) -> LVFA:
    """Fresh initial state fanned out into disjoint copies of the components."""
    lat = S.lattice
    top = lat.top
    q0 = "q0"
    states = [q0]
    delta = {}
    final = {}
    start_accepting = []
    for i, (k, dfa) in enumerate(S.components):
        def name(q, i=i):
            return f"c{i}:{q}"
        states += [name(q) for q in dfa.states]
        for q in dfa.states:
            for s in S.alphabet:
                delta[(name(q), s, name(dfa.delta[q][s]))] = top
            if q in dfa.accepting:
                final[name(q)] = k
        for s in S.alphabet:
            delta[(q0, s, name(dfa.delta[dfa.start][s]))] = top
        if dfa.start in dfa.accepting:
            start_accepting.append(k)
    final[q0] = lat.join_all(start_accepting)
    return LVFA(lat, states, S.alphabet, delta, {q0: top}, final)


def normalize(S: StepLanguage) -> MooreMachine:
    """Reachable product of the components; each state outputs the join of
    the constants of the components accepting there."""
    lat = S.lattice
    comps = S.components
    start = tuple(dfa.start for _, dfa in comps)
    index = {start: 0}
    order = [start]
    delta = {}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        row = delta[index[t]] = {}
        for s in S.alphabet:
            nxt = tuple(dfa.delta[q][s] for q, (_, dfa) in zip(t, comps))
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            row[s] = index[nxt]
    output = {i: lat.join_all(k for q, (k, dfa) in zip(t, comps) if q in dfa.accepting)
              for i, t in enumerate(order)}
    dfa = ClassicalDFA(range(len(order)), S.alphabet, delta, 0, [])
    return MooreMachine(lat, dfa, output)


def minimize_moore(M: MooreMachine) -> MooreMachine:
    d = M.dfa
    block = refine_partition(d.states, d.alphabet, d.delta, lambda q: M.output[q])
    delta = {block[q]: {s: block[d.delta[q][s]] for s in d.alphabet} for q in d.states}
    output = {block[q]: M.output[q] for q in d.states}
    dfa = ClassicalDFA(sorted(delta), d.alphabet, delta, block[d.start], [])
    return MooreMachine(M.lattice, dfa, output)


def canonical(S: StepLanguage) -> StepLanguage:
    """Disjoint form read off the minimal Moore machine of ``S``."""
    return lvdfa_to_step(minimize_moore(normalize(S)))


def to_disjoint(S: StepLanguage) -> StepLanguage:
    return S if S.disjoint else canonical(S)


def equivalent(A: StepLanguage, B: StepLanguage) -> Equivalence:
    """Pointwise equality, with a shortest distinguishing word on failure."""
    _check_compatible(A, B)
    x, y = normalize(A), normalize(B)
    start = (x.dfa.start, y.dfa.start)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        p, q = pair
        if x.output[p] != y.output[q]:
            word = []
            while parent[pair] is not None:
                pair, s = parent[pair]
                word.append(s)
            return Equivalence(False, tuple(reversed(word)))
        for s in A.alphabet:
            nxt = (x.dfa.delta[p][s], y.dfa.delta[q][s])
            if nxt not in parent:
                parent[nxt] = (pair, s)
                queue.append(nxt)
    return Equivalence(True, None)


# ---------------------------------------------------------------- closures

def constant(lattice: OrthomodularLattice, alphabet, value) -> StepLanguage:
    """The language assigning ``value`` to every word."""
    return StepLanguage(lattice, alphabet, [(value, universal_dfa(alphabet))])


def op_union(A: StepLanguage, B: StepLanguage) -> StepLanguage:
    _check_compatible(A, B)
    return StepLanguage(A.lattice, A.alphabet, A.components + B.components)


def op_intersect(A: StepLanguage, B: StepLanguage) -> StepLanguage:
    _check_compatible(A, B)
    A, B = to_disjoint(A), to_disjoint(B)
    lat = A.lattice
    comps = []
    for (k, x), (d, y) in itertools.product(A.components, B.components):
        r = lat.meet(k, d)
        if r != lat.bottom:
            both = dfa_product(x, y, "intersect")
            if not is_empty(both):
                comps.append((r, both))
    return StepLanguage(lat, A.alphabet, comps)


def op_scalar(r, A: StepLanguage) -> StepLanguage:
    lat = A.lattice
    r = lat.index(r)
    A = to_disjoint(A)
    return StepLanguage(lat, A.alphabet, [(lat.meet(r, k), dfa) for k, dfa in A.components])


def op_complement(A: StepLanguage) -> StepLanguage:
    A = to_disjoint(A)
    lat = A.lattice
    comps = [(lat.orth(k), dfa) for k, dfa in A.components]
    covered = None
    for _, dfa in A.components:
        covered = dfa if covered is None else dfa_product(covered, dfa, "union")
    rest = universal_dfa(A.alphabet) if covered is None else dfa_complement(covered)
    comps.append((lat.top, rest))
    return StepLanguage(lat, A.alphabet, comps)


def op_concat(A: StepLanguage, B: StepLanguage) -> StepLanguage:
    _check_compatible(A, B)
    A, B = to_disjoint(A), to_disjoint(B)
    lat = A.lattice
    comps = []
    for (k, x), (d, y) in itertools.product(A.components, B.components):
        r = lat.meet(k, d)
        if r != lat.bottom:
            comps.append((r, determinize_classical(nfa_concat(x, y))))
    return StepLanguage(lat, A.alphabet, comps)


def _live_states(dfa: ClassicalDFA) -> set:
    pred: dict = {}
    for q in dfa.states:
        for s in dfa.alphabet:
            pred.setdefault(dfa.delta[q][s], set()).add(q)
    live = set(dfa.accepting)
    queue = deque(live)
    while queue:
        for p in pred.get(queue.popleft(), ()):
            if p not in live:
                live.add(p)
                queue.append(p)
    return live


def op_star(A: StepLanguage, cap: int = DEFAULT_STAR_COMPONENT_CAP) -> StepLanguage:
    """Kleene closure ``⋁_K r_K · 1_{L(K)} ∨ 1_{ε}``.

    ``L(K)`` holds the words that split into nonempty pieces, each piece in
    some component, using exactly the component set ``K``; ``r_K`` is the
    meet of those components' constants.  Built from one NFA whose states
    carry the set of components used so far, then determinized once; each
    ``K`` reads its accepting states off the shared subset DFA.
    """
    A = to_disjoint(A)
    lat = A.lattice
    comps = A.components
    m = len(comps)
    if m > cap:
        raise ResourceCapError(f"star needs {2 ** m} component subsets; cap is {cap} components")
    alphabet = A.alphabet
    live = [_live_states(dfa) for _, dfa in comps]

    start = ("B", 0)
    states = {start}
    transitions = set()
    queue = deque([start])

    def add(src, sym, dst):
        transitions.add((src, sym, dst))
        if dst not in states:
            states.add(dst)
            queue.append(dst)

    while queue:
        node = queue.popleft()
        if node[0] == "B":
            used = node[1]
            for i, (_, dfa) in enumerate(comps):
                for s in alphabet:
                    q = dfa.delta[dfa.start][s]
                    if q in live[i]:
                        add(node, s, ("P", used | 1 << i, i, q))
        else:
            _, used, i, q = node
            dfa = comps[i][1]
            for s in alphabet:
                p = dfa.delta[q][s]
                if p in live[i]:
                    add(node, s, ("P", used, i, p))
            if q in dfa.accepting:
                add(node, EPSILON, ("B", used))

    nfa = ClassicalNFA(states, alphabet, transitions, [start], [])
    dfa, subsets = subset_construction(nfa)
    marks = [frozenset(n[1] for n in sub if n[0] == "B") for sub in subsets]
    block = refine_partition(dfa.states, alphabet, dfa.delta, lambda d: marks[d])
    delta = {block[d]: {s: block[dfa.delta[d][s]] for s in alphabet} for d in dfa.states}
    blocks = sorted(delta)
    accepting: dict[int, set] = {}
    for d in dfa.states:
        for used in marks[d]:
            accepting.setdefault(used, set()).add(block[d])
    result = []
    for used in sorted(accepting):
        r = lat.meet_all(comps[i][0] for i in range(m) if used >> i & 1)
        result.append((r, ClassicalDFA(blocks, alphabet, delta, block[0], accepting[used])))
    return StepLanguage(lat, alphabet, result)


def star_oracle(A: StepLanguage, word, bound: int = DEFAULT_ORACLE_BOUND) -> LValue:
    """Kleene closure by enumerating every composition of ``word``.

    The empty decomposition gives top at ε.  Extra empty pieces can only meet
    in ``A(ε)``; each decomposition is taken with and without that meet.
    """
    word = _check_word(A, word)
    if len(word) > bound:
        raise ResourceCapError(f"word length {len(word)} exceeds oracle bound {bound}")
    lat = A.lattice
    if not word:
        return lat.one
    at_eps = A.value_index(())
    n = len(word)
    result = lat.bottom
    for cuts in itertools.product((False, True), repeat=n - 1):
        bounds = [0] + [i + 1 for i, c in enumerate(cuts) if c] + [n]
        v = lat.meet_all(A.value_index(word[a:b]) for a, b in zip(bounds, bounds[1:]))
        result = lat.join(result, lat.join(v, lat.meet(v, at_eps)))
    return LValue(lat, result)


# ---------------------------------------------------------- cuts and levels

def _select(A: StepLanguage, keep) -> ClassicalDFA:
    M = normalize(A)
    d = M.dfa
    return ClassicalDFA(d.states, d.alphabet, d.delta, d.start,
                        [q for q in d.states if keep(M.output[q])])


def cut(A: StepLanguage, r) -> ClassicalDFA:
    """DFA of ``{w : A(w) >= r}``."""
    lat = A.lattice
    r = lat.index(r)
    return _select(A, lambda v: lat.leq(r, v))


def level(A: StepLanguage, r) -> ClassicalDFA:
    """DFA of ``{w : A(w) = r}``."""
    r = A.lattice.index(r)
    return _select(A, lambda v: v == r)


def image(A: StepLanguage) -> set[LValue]:
    """Values actually taken by the language."""
    M = normalize(A)
    return {LValue(A.lattice, v) for v in M.output.values()}

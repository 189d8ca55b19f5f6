"""Lattice-valued finite automata.

Nondeterministic automata (with or without empty moves) whose transitions,
initial and final maps take values in an orthomodular lattice, their
deterministic counterparts, and the constructions between them.

The central observation is that a run only ever takes meets of values already
present in the machine, so annotating each reachable state with the meet
accumulated along the path keeps the state space finite without ever joining
values mid-run.  Joins are taken only at the end, which is what makes the
construction sound in non-distributive lattices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .classical import EPSILON, ClassicalDFA
from .errors import DocumentError, ResourceCapError, UnknownSymbolError
from .oml import LValue, OrthomodularLattice

DEFAULT_STATE_CAP = 100_000


def _coerce_delta(lat, delta) -> dict:
    items = delta.items() if isinstance(delta, Mapping) else ((t[:3], t[3]) for t in delta)
    out = {}
    for key, value in items:
        p, s, q = key
        v = lat.index(value)
        if v != lat.bottom:
            out[(p, s, q)] = v
    return out


def _coerce_map(lat, m: Mapping | None, states, what) -> dict:
    out = {}
    for q, value in (m or {}).items():
        if q not in states:
            raise DocumentError(f"{what} refers to unknown state {q!r}")
        v = lat.index(value)
        if v != lat.bottom:
            out[q] = v
    return out


class LVFAEps:
    """Lattice-valued automaton whose transitions may read ``EPSILON``.

    ``delta`` maps ``(p, symbol, q)`` to a value (or is an iterable of
    ``(p, symbol, q, value)``); absent triples are bottom.  ``initial`` and
    ``final`` map states to values, again defaulting to bottom.
    """

    allow_epsilon = True

    def __init__(self, lattice: OrthomodularLattice, states, alphabet, delta, initial, final):
        self.lattice = lattice
        self.states = tuple(states)
        self.alphabet = tuple(alphabet)
        if len(set(self.states)) != len(self.states):
            raise DocumentError("duplicate state name")
        if EPSILON in self.alphabet:
            raise DocumentError("the empty string cannot be an alphabet symbol")
        state_set = set(self.states)
        self.delta = _coerce_delta(lattice, delta)
        symbols = set(self.alphabet) | ({EPSILON} if self.allow_epsilon else set())
        for p, s, q in self.delta:
            if p not in state_set or q not in state_set:
                raise DocumentError(f"transition {(p, s, q)!r} refers to an unknown state")
            if s not in symbols:
                if s == EPSILON:
                    raise DocumentError("empty moves are not allowed in this automaton kind")
                raise UnknownSymbolError(f"transition symbol {s!r} not in alphabet {self.alphabet}")
        self.initial = _coerce_map(lattice, initial, state_set, "initial")
        self.final = _coerce_map(lattice, final, state_set, "final")
        order = {q: i for i, q in enumerate(self.states)}
        succ: dict[tuple, list] = {}
        for (p, s, q), v in sorted(self.delta.items(), key=lambda kv: order[kv[0][2]]):
            succ.setdefault((p, s), []).append((q, v))
        self._succ = {k: tuple(v) for k, v in succ.items()}

    def successors(self, state, symbol) -> tuple:
        return self._succ.get((state, symbol), ())

    def transition_value(self, p, symbol, q) -> int:
        return self.delta.get((p, symbol, q), self.lattice.bottom)

    def initial_value(self, q) -> int:
        return self.initial.get(q, self.lattice.bottom)

    def final_value(self, q) -> int:
        return self.final.get(q, self.lattice.bottom)

    @property
    def has_epsilon(self) -> bool:
        return any(s == EPSILON for _, s, _ in self.delta)

    def is_crisp(self) -> bool:
        """Every transition value is bottom or top."""
        top = self.lattice.top
        return all(v == top for v in self.delta.values())

    def __repr__(self):
        return (f"<{type(self).__name__} {len(self.states)} states over {self.alphabet} "
                f"in {self.lattice.name!r}>")


class LVFA(LVFAEps):
    """Lattice-valued automaton without empty moves."""

    allow_epsilon = False


class LVDFA:
    """Crisp deterministic automaton with a lattice-valued final map."""

    def __init__(self, lattice: OrthomodularLattice, states, alphabet, delta: Mapping, q0,
                 final: Mapping | None = None, annotations: Mapping | None = None):
        self.lattice = lattice
        self.states = tuple(states)
        self.alphabet = tuple(alphabet)
        state_set = set(self.states)
        if len(state_set) != len(self.states):
            raise DocumentError("duplicate state name")
        if q0 not in state_set:
            raise DocumentError(f"initial state {q0!r} is not a state")
        self.q0 = q0
        self.delta = {}
        for q in self.states:
            row = delta.get(q)
            if row is None:
                raise DocumentError(f"no transitions for state {q!r}")
            for s in self.alphabet:
                if row.get(s) not in state_set:
                    raise DocumentError(f"transition from {q!r} on {s!r} is missing or invalid")
            extra = set(row) - set(self.alphabet)
            if extra:
                raise UnknownSymbolError(f"transition symbols {sorted(extra)} not in alphabet")
            self.delta[q] = {s: row[s] for s in self.alphabet}
        self.final = _coerce_map(lattice, final, state_set, "final")
        self.annotations = dict(annotations or {})

    def final_value(self, q) -> int:
        return self.final.get(q, self.lattice.bottom)

    def run(self, word, state=None):
        q = self.q0 if state is None else state
        for s in word:
            try:
                q = self.delta[q][s]
            except KeyError:
                raise UnknownSymbolError(f"symbol {s!r} not in alphabet {self.alphabet}") from None
        return q

    def skeleton(self, accepting: Iterable = ()) -> ClassicalDFA:
        return ClassicalDFA(self.states, self.alphabet, self.delta, self.q0, accepting)

    def __repr__(self):
        return f"<LVDFA {len(self.states)} states over {self.alphabet} in {self.lattice.name!r}>"


@dataclass(frozen=True)
class AnnotatedStateSet:
    """A determinization state: pairs (state, accumulated nonzero value)."""

    pairs: frozenset
    lattice: OrthomodularLattice = field(compare=False, repr=False)

    def __iter__(self):
        for q, r in sorted(self.pairs, key=lambda t: (str(t[0]), t[1])):
            yield q, LValue(self.lattice, r)

    def __len__(self):
        return len(self.pairs)

    def __str__(self):
        return "{" + ",".join(f"({q},{r})" for q, r in self) + "}"


@dataclass(frozen=True)
class PumpDecomposition:
    u: tuple
    v: tuple
    w: tuple
    n: int

    def pumped(self, times: int) -> tuple:
        return self.u + self.v * times + self.w


def _check_word(machine, word) -> tuple:
    word = tuple(word)
    for s in word:
        if s not in machine.alphabet:
            raise UnknownSymbolError(f"symbol {s!r} not in alphabet {machine.alphabet}")
    return word


def _require_eps_free(A):
    if A.has_epsilon:
        raise DocumentError("automaton has empty moves; use the epsilon constructions")


# --------------------------------------------------------------- evaluation

def eval_nfa_paths(A: LVFAEps, word) -> LValue:
    """Join over every state sequence of the meet of its values (brute force)."""
    _require_eps_free(A)
    word = _check_word(A, word)
    lat = A.lattice
    M, J, zero = lat.meet_table, lat.join_table, lat.bottom
    n = len(word)
    result = zero

    def walk(q, i, acc):
        nonlocal result
        if i == n:
            result = J[result][M[acc][A.final_value(q)]]
            return
        for p in A.states:
            m = M[acc][A.transition_value(q, word[i], p)]
            if m != zero:
                walk(p, i + 1, m)

    for q in A.states:
        start = A.initial_value(q)
        if start != zero:
            walk(q, 0, start)
    return LValue(lat, result)


def _eta(A: LVFAEps, Z: frozenset, symbol) -> frozenset:
    M, zero = A.lattice.meet_table, A.lattice.bottom
    out = set()
    for q, r in Z:
        row = M[r]
        for p, v in A._succ.get((q, symbol), ()):
            m = row[v]
            if m != zero:
                out.add((p, m))
    return frozenset(out)


def _final_of(A: LVFAEps, Z: Iterable) -> int:
    lat = A.lattice
    return lat.join_all(lat.meet(r, A.final_value(q)) for q, r in Z)


def _start_set(A: LVFAEps) -> frozenset:
    return frozenset(A.initial.items())


def eval_nfa(A: LVFAEps, word) -> LValue:
    """Propagate annotated states symbol by symbol, joining only at the end."""
    _require_eps_free(A)
    word = _check_word(A, word)
    Z = _start_set(A)
    for s in word:
        Z = _eta(A, Z, s)
    return LValue(A.lattice, _final_of(A, Z))


def eval_dfa(D: LVDFA, word) -> LValue:
    return LValue(D.lattice, D.final_value(D.run(_check_word(D, word))))


def eval_eps_paths(A: LVFAEps, word) -> LValue:
    """Join over all paths whose labels spell ``word``, empty moves included.

    Searches configurations (position, state, accumulated value).  Values only
    descend along a path, so the configuration space is finite and empty-move
    cycles terminate.
    """
    word = _check_word(A, word)
    lat = A.lattice
    M, J, zero = lat.meet_table, lat.join_table, lat.bottom
    n = len(word)
    seen = set()
    stack = [(0, q, r) for q, r in A.initial.items()]
    result = zero
    while stack:
        config = stack.pop()
        if config in seen:
            continue
        seen.add(config)
        i, q, r = config
        if i == n:
            result = J[result][M[r][A.final_value(q)]]
        for p in A.states:
            m = M[r][A.transition_value(q, EPSILON, p)]
            if m != zero:
                stack.append((i, p, m))
            if i < n:
                m = M[r][A.transition_value(q, word[i], p)]
                if m != zero:
                    stack.append((i + 1, p, m))
    return LValue(lat, result)


def evaluate(machine, word) -> LValue:
    """Value of ``word`` under any automaton kind."""
    if isinstance(machine, LVDFA):
        return eval_dfa(machine, word)
    if machine.has_epsilon:
        return eval_eps_paths(machine, word)
    return eval_nfa(machine, word)


# ------------------------------------------------------------- image bound

def generator_values(A: LVFAEps) -> set[int]:
    """Images of the total transition, initial and final maps."""
    lat = A.lattice
    symbols = len(A.alphabet) + (1 if A.has_epsilon else 0)
    xs = set(A.delta.values()) | set(A.initial.values()) | set(A.final.values())
    n = len(A.states)
    if len(A.delta) < n * n * symbols or len(A.initial) < n or len(A.final) < n:
        xs.add(lat.bottom)
    return xs


def annotation_values(A: LVFAEps) -> frozenset[int]:
    """Meet-closure of the generator values: every annotation lies here."""
    return A.lattice.meet_closure_idx(generator_values(A))


def image_bound(A: LVFAEps) -> set[LValue]:
    """Join-closure of the meet-closure of the generator values.

    Every value the automaton assigns to a word is a member.
    """
    lat = A.lattice
    bound = lat.join_closure_idx(annotation_values(A))
    return {LValue(lat, i) for i in bound}


# --------------------------------------------------------- determinization

def _explore(A: LVFAEps, symbols, cap: int, prefix: str):
    start = _start_set(A)
    index = {start: 0}
    order = [start]
    edges = []
    queue = deque([start])
    while queue:
        Z = queue.popleft()
        for s in symbols:
            nxt = _eta(A, Z, s)
            if nxt not in index:
                if len(order) >= cap:
                    raise ResourceCapError(
                        f"annotated-state exploration exceeded the cap of {cap} states")
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            edges.append((index[Z], s, index[nxt]))
    names = [f"{prefix}{i}" for i in range(len(order))]
    return order, names, edges


def determinize(A: LVFAEps, cap: int = DEFAULT_STATE_CAP) -> LVDFA:
    """Quantum subset construction restricted to reachable annotated sets.

    States are named ``p0, p1, ...`` in breadth-first order from the start
    set; ``result.annotations`` maps each name to its ``AnnotatedStateSet``.
    """
    _require_eps_free(A)
    order, names, edges = _explore(A, A.alphabet, cap, "p")
    delta = {name: {} for name in names}
    for i, s, j in edges:
        delta[names[i]][s] = names[j]
    final = {names[i]: _final_of(A, Z) for i, Z in enumerate(order)}
    annotations = {names[i]: AnnotatedStateSet(Z, A.lattice) for i, Z in enumerate(order)}
    return LVDFA(A.lattice, names, A.alphabet, delta, names[0], final, annotations)


def epsilon_closure(A: LVFAEps, xs: Iterable) -> frozenset:
    """States reachable from ``xs`` by empty moves; ``A`` must be crisp."""
    if not A.is_crisp():
        raise ValueError("epsilon closure is defined for crisp transitions only")
    seen = set(xs)
    stack = list(seen)
    while stack:
        for p, _ in A.successors(stack.pop(), EPSILON):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return frozenset(seen)


def crispify_eps(A: LVFAEps, cap: int = DEFAULT_STATE_CAP) -> LVFAEps:
    """Equivalent automaton with crisp transitions and one initial state.

    The annotated-set construction is applied to every symbol and to the empty
    move; the start set is the unique initial state, with value top.
    """
    symbols = A.alphabet + (EPSILON,)
    order, names, edges = _explore(A, symbols, cap, "z")
    top = A.lattice.top
    delta = {(names[i], s, names[j]): top for i, s, j in edges}
    final = {names[i]: _final_of(A, Z) for i, Z in enumerate(order)}
    out = LVFAEps(A.lattice, names, A.alphabet, delta, {names[0]: top}, final)
    out.annotations = {names[i]: AnnotatedStateSet(Z, A.lattice) for i, Z in enumerate(order)}
    return out


def remove_epsilon(A: LVFAEps) -> LVFA:
    """Drop empty moves from a crisp automaton with a single initial state.

    Each symbol step is wrapped in closures; the initial state's final value
    absorbs the final values of its closure.
    """
    if not A.is_crisp():
        raise ValueError("remove_epsilon needs crisp transitions; run crispify_eps first")
    top = A.lattice.top
    if len(A.initial) != 1 or next(iter(A.initial.values())) != top:
        raise ValueError("remove_epsilon needs a single initial state with value top; "
                         "run crispify_eps first")
    (q0,) = A.initial
    closure = {q: epsilon_closure(A, [q]) for q in A.states}
    delta = {}
    for q in A.states:
        for s in A.alphabet:
            moved = set()
            for p in closure[q]:
                moved.update(t for t, _ in A.successors(p, s))
            for t in epsilon_closure(A, moved):
                delta[(q, s, t)] = top
    final = dict(A.final)
    final[q0] = A.lattice.join_all(A.final_value(p) for p in closure[q0])
    return LVFA(A.lattice, A.states, A.alphabet, delta, {q0: top}, final)


def eps_to_dfa(A: LVFAEps, cap: int = DEFAULT_STATE_CAP) -> LVDFA:
    return determinize(remove_epsilon(crispify_eps(A, cap)), cap)


def as_lvdfa(machine, cap: int = DEFAULT_STATE_CAP) -> LVDFA:
    """Any automaton kind as an equivalent deterministic one."""
    if isinstance(machine, LVDFA):
        return machine
    if machine.has_epsilon:
        return eps_to_dfa(machine, cap)
    return determinize(machine, cap)


# ------------------------------------------------------------------ pumping

def pump_decompose(D: LVDFA, z) -> PumpDecomposition:
    """Split ``z`` at the first repeated state of its run.

    The pieces satisfy ``|uv| <= |Q|`` and ``v`` nonempty, and every
    ``u v^l w`` reaches the same final state as ``z``.
    """
    z = _check_word(D, z)
    n = len(D.states)
    if len(z) < n:
        raise ValueError(f"word length {len(z)} is below the state count {n}")
    seen = {D.q0: 0}
    q = D.q0
    for k in range(1, n + 1):
        q = D.delta[q][z[k - 1]]
        if q in seen:
            j = seen[q]
            return PumpDecomposition(z[:j], z[j:k], z[k:], n)
        seen[q] = k
    raise AssertionError("pigeonhole violated")  # pragma: no cover

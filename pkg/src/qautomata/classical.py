"""Classical finite automata and regular expressions.

Crisp machinery underneath the lattice-valued constructions: subset
construction, product and Boolean operations, Thompson's construction, state
elimination and an on-the-fly equivalence check with shortest
counterexamples.  Machines are immutable once built.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import AlphabetMismatchError, DocumentError, UnknownSymbolError

EPSILON = ""

Word = tuple


def as_word(word) -> tuple:
    return tuple(word)


class ClassicalNFA:
    """Nondeterministic automaton; ``EPSILON`` marks empty moves."""

    def __init__(self, states, alphabet, transitions, initial, accepting):
        self.states = frozenset(states)
        self.alphabet = tuple(alphabet)
        if EPSILON in self.alphabet:
            raise DocumentError("the empty string cannot be an alphabet symbol")
        self.transitions = frozenset(transitions)
        self.initial = frozenset(initial)
        self.accepting = frozenset(accepting)
        symbols = set(self.alphabet) | {EPSILON}
        succ: dict[tuple, set] = {}
        for p, s, q in self.transitions:
            if p not in self.states or q not in self.states:
                raise DocumentError(f"transition {(p, s, q)!r} leaves the state set")
            if s not in symbols:
                raise UnknownSymbolError(f"transition symbol {s!r} not in alphabet")
            succ.setdefault((p, s), set()).add(q)
        if not self.initial <= self.states or not self.accepting <= self.states:
            raise DocumentError("initial and accepting states must be states")
        self._succ = {k: frozenset(v) for k, v in succ.items()}

    def successors(self, state, symbol) -> frozenset:
        return self._succ.get((state, symbol), frozenset())

    def epsilon_closure(self, xs: Iterable) -> frozenset:
        seen = set(xs)
        stack = list(seen)
        while stack:
            for q in self._succ.get((stack.pop(), EPSILON), ()):
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return frozenset(seen)

    def step(self, xs: Iterable, symbol) -> frozenset:
        moved = set()
        for p in xs:
            moved |= self._succ.get((p, symbol), frozenset())
        return self.epsilon_closure(moved)

    def accepts(self, word) -> bool:
        current = self.epsilon_closure(self.initial)
        for s in word:
            if s not in self.alphabet:
                raise UnknownSymbolError(f"symbol {s!r} not in alphabet {self.alphabet}")
            current = self.step(current, s)
        return bool(current & self.accepting)

    def __repr__(self):
        return f"<ClassicalNFA {len(self.states)} states over {self.alphabet}>"


class ClassicalDFA:
    """Complete deterministic automaton: ``delta[state][symbol]`` is total."""

    def __init__(self, states, alphabet, delta: Mapping, start, accepting):
        self.states = tuple(states)
        self.alphabet = tuple(alphabet)
        self.delta = {q: dict(delta[q]) for q in self.states if q in delta}
        self.start = start
        self.accepting = frozenset(accepting)
        state_set = set(self.states)
        if len(state_set) != len(self.states):
            raise DocumentError("duplicate DFA state")
        if start not in state_set:
            raise DocumentError(f"start state {start!r} is not a state")
        if not self.accepting <= state_set:
            raise DocumentError("accepting states must be states")
        for q in self.states:
            row = self.delta.get(q)
            if row is None:
                raise DocumentError(f"DFA has no transitions for state {q!r}")
            for s in self.alphabet:
                if row.get(s) not in state_set:
                    raise DocumentError(f"DFA transition from {q!r} on {s!r} is missing or invalid")

    def run(self, word, state=None):
        q = self.start if state is None else state
        for s in word:
            try:
                q = self.delta[q][s]
            except KeyError:
                raise UnknownSymbolError(f"symbol {s!r} not in alphabet {self.alphabet}") from None
        return q

    def accepts(self, word) -> bool:
        return self.run(word) in self.accepting

    def __repr__(self):
        return f"<ClassicalDFA {len(self.states)} states over {self.alphabet}>"

    def to_document(self) -> dict:
        return {
            "states": [str(q) for q in self.states],
            "start": str(self.start),
            "accepting": sorted(str(q) for q in self.accepting),
            "delta": {str(q): {s: str(self.delta[q][s]) for s in self.alphabet}
                      for q in self.states},
        }

    @classmethod
    def from_document(cls, doc: Mapping, alphabet: Sequence[str]) -> ClassicalDFA:
        try:
            return cls(doc["states"], alphabet, doc["delta"], doc["start"], doc["accepting"])
        except KeyError as exc:
            raise DocumentError(f"DFA document is missing field {exc.args[0]!r}") from None


class Equivalence(NamedTuple):
    """Result of an equivalence check; falsy when a counterexample exists."""

    equivalent: bool
    counterexample: tuple | None = None

    def __bool__(self):
        return self.equivalent


def _check_alphabets(x, y):
    if set(x.alphabet) != set(y.alphabet):
        raise AlphabetMismatchError(f"alphabets differ: {x.alphabet} vs {y.alphabet}")


# ------------------------------------------------------------ basic machines

def empty_dfa(alphabet) -> ClassicalDFA:
    alphabet = tuple(alphabet)
    return ClassicalDFA([0], alphabet, {0: {s: 0 for s in alphabet}}, 0, [])


def universal_dfa(alphabet) -> ClassicalDFA:
    alphabet = tuple(alphabet)
    return ClassicalDFA([0], alphabet, {0: {s: 0 for s in alphabet}}, 0, [0])


def word_dfa(word, alphabet) -> ClassicalDFA:
    """DFA accepting exactly one word (``()`` gives the language {ε})."""
    word, alphabet = tuple(word), tuple(alphabet)
    n = len(word)
    dead = n + 1
    delta = {i: {s: (i + 1 if i < n and s == word[i] else dead) for s in alphabet}
             for i in range(n + 1)}
    delta[dead] = {s: dead for s in alphabet}
    for s in word:
        if s not in alphabet:
            raise UnknownSymbolError(f"symbol {s!r} not in alphabet {alphabet}")
    return ClassicalDFA(range(n + 2), alphabet, delta, 0, [n])


def dfa_to_nfa(d: ClassicalDFA) -> ClassicalNFA:
    transitions = [(q, s, d.delta[q][s]) for q in d.states for s in d.alphabet]
    return ClassicalNFA(d.states, d.alphabet, transitions, [d.start], d.accepting)


# ---------------------------------------------------------- determinization

def subset_construction(n: ClassicalNFA) -> tuple[ClassicalDFA, list[frozenset]]:
    """Reachable-subset DFA plus the NFA state set behind each DFA state.

    DFA states are numbered in breadth-first discovery order; the empty
    subset, when reached, is the dead state.
    """
    start = n.epsilon_closure(n.initial)
    index = {start: 0}
    subsets = [start]
    delta: dict[int, dict] = {}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        row = delta[index[current]] = {}
        for s in n.alphabet:
            nxt = n.step(current, s)
            if nxt not in index:
                index[nxt] = len(subsets)
                subsets.append(nxt)
                queue.append(nxt)
            row[s] = index[nxt]
    accepting = [i for i, sub in enumerate(subsets) if sub & n.accepting]
    return ClassicalDFA(range(len(subsets)), n.alphabet, delta, 0, accepting), subsets


def determinize_classical(n: ClassicalNFA) -> ClassicalDFA:
    return subset_construction(n)[0]


def trim(d: ClassicalDFA) -> ClassicalDFA:
    """Restrict to reachable states, renumbered in BFS order."""
    index = {d.start: 0}
    order = [d.start]
    queue = deque([d.start])
    while queue:
        q = queue.popleft()
        for s in d.alphabet:
            p = d.delta[q][s]
            if p not in index:
                index[p] = len(order)
                order.append(p)
                queue.append(p)
    delta = {index[q]: {s: index[d.delta[q][s]] for s in d.alphabet} for q in order}
    return ClassicalDFA(range(len(order)), d.alphabet, delta, 0,
                        [index[q] for q in order if q in d.accepting])


def refine_partition(states: Sequence, alphabet: Sequence, delta: Mapping, key) -> dict:
    """Coarsest partition compatible with ``key`` and the transitions.

    Returns a map state -> block number (Moore-style iterated refinement).
    """
    block = {}
    labels: dict = {}
    for q in states:
        block[q] = labels.setdefault(key(q), len(labels))
    while True:
        labels = {}
        new = {}
        for q in states:
            sig = (block[q],) + tuple(block[delta[q][s]] for s in alphabet)
            new[q] = labels.setdefault(sig, len(labels))
        if len(labels) == len(set(block.values())):
            return new
        block = new


def minimize(d: ClassicalDFA) -> ClassicalDFA:
    """Reachable minimal DFA; internal plumbing for keeping products small."""
    d = trim(d)
    block = refine_partition(d.states, d.alphabet, d.delta, lambda q: q in d.accepting)
    delta = {block[q]: {s: block[d.delta[q][s]] for s in d.alphabet} for q in d.states}
    out = ClassicalDFA(sorted(delta), d.alphabet, delta, block[d.start],
                       {block[q] for q in d.accepting})
    return trim(out)


# ----------------------------------------------------- Boolean combinations

_PRODUCT_MODES = {
    "intersect": lambda a, b: a and b,
    "union": lambda a, b: a or b,
    "difference": lambda a, b: a and not b,
    "xor": lambda a, b: a != b,
}


def dfa_product(x: ClassicalDFA, y: ClassicalDFA, mode: str = "intersect") -> ClassicalDFA:
    _check_alphabets(x, y)
    try:
        accept = _PRODUCT_MODES[mode]
    except KeyError:
        raise ValueError(f"unknown product mode {mode!r}") from None
    start = (x.start, y.start)
    index = {start: 0}
    pairs = [start]
    delta = {}
    queue = deque([start])
    while queue:
        p, q = pair = queue.popleft()
        row = delta[index[pair]] = {}
        for s in x.alphabet:
            nxt = (x.delta[p][s], y.delta[q][s])
            if nxt not in index:
                index[nxt] = len(pairs)
                pairs.append(nxt)
                queue.append(nxt)
            row[s] = index[nxt]
    accepting = [i for i, (p, q) in enumerate(pairs) if accept(p in x.accepting, q in y.accepting)]
    return ClassicalDFA(range(len(pairs)), x.alphabet, delta, 0, accepting)


def dfa_complement(x: ClassicalDFA) -> ClassicalDFA:
    return ClassicalDFA(x.states, x.alphabet, x.delta, x.start,
                        [q for q in x.states if q not in x.accepting])


def _tagged(n: ClassicalNFA, tag):
    return (
        {(tag, q) for q in n.states},
        {((tag, p), s, (tag, q)) for p, s, q in n.transitions},
        {(tag, q) for q in n.initial},
        {(tag, q) for q in n.accepting},
    )


def _as_nfa(x) -> ClassicalNFA:
    return dfa_to_nfa(x) if isinstance(x, ClassicalDFA) else x


def nfa_union(x, y) -> ClassicalNFA:
    x, y = _as_nfa(x), _as_nfa(y)
    _check_alphabets(x, y)
    s1, t1, i1, f1 = _tagged(x, 0)
    s2, t2, i2, f2 = _tagged(y, 1)
    return ClassicalNFA(s1 | s2, x.alphabet, t1 | t2, i1 | i2, f1 | f2)


def nfa_concat(x, y) -> ClassicalNFA:
    x, y = _as_nfa(x), _as_nfa(y)
    _check_alphabets(x, y)
    s1, t1, i1, f1 = _tagged(x, 0)
    s2, t2, i2, f2 = _tagged(y, 1)
    links = {(p, EPSILON, q) for p in f1 for q in i2}
    return ClassicalNFA(s1 | s2, x.alphabet, t1 | t2 | links, i1, f2)


def nfa_star(x) -> ClassicalNFA:
    x = _as_nfa(x)
    s, t, i, f = _tagged(x, 0)
    hub = ("star",)
    links = {(hub, EPSILON, q) for q in i} | {(p, EPSILON, hub) for p in f}
    return ClassicalNFA(s | {hub}, x.alphabet, t | links, {hub}, {hub})


# ------------------------------------------------------ emptiness, equality

def shortest_accepted(d: ClassicalDFA) -> tuple | None:
    """A shortest accepted word, or None for the empty language."""
    parent = {d.start: None}
    queue = deque([d.start])
    while queue:
        q = queue.popleft()
        if q in d.accepting:
            word = []
            while parent[q] is not None:
                q, s = parent[q]
                word.append(s)
            return tuple(reversed(word))
        for s in d.alphabet:
            p = d.delta[q][s]
            if p not in parent:
                parent[p] = (q, s)
                queue.append(p)
    return None


def is_empty(d: ClassicalDFA) -> bool:
    return shortest_accepted(d) is None


def dfa_equivalent(x: ClassicalDFA, y: ClassicalDFA) -> Equivalence:
    """Synchronized breadth-first search for a shortest distinguishing word."""
    _check_alphabets(x, y)
    witness = shortest_accepted(dfa_product(x, y, "xor"))
    return Equivalence(witness is None, witness)


# ------------------------------------------------------- regular expressions

SUM, CONCAT, FACTOR = 0, 1, 2


class Regex:
    """Base of the expression tree; ``str()`` gives re-parsable text."""

    level = FACTOR
    prefix = False

    def __str__(self):
        return self.to_text()

    def to_text(self) -> str:
        raise NotImplementedError


def _paren(node: Regex, min_level: int, allow_prefix: bool = True) -> str:
    text = node.to_text()
    if node.level < min_level or (node.prefix and not allow_prefix):
        return f"({text})"
    return text


@dataclass(frozen=True)
class Sym(Regex):
    symbol: str

    def to_text(self):
        return self.symbol


@dataclass(frozen=True)
class Eps(Regex):
    def to_text(self):
        return "_eps"


@dataclass(frozen=True)
class Empty(Regex):
    def to_text(self):
        return "_empty"


@dataclass(frozen=True)
class Union(Regex):
    left: Regex
    right: Regex
    level = SUM

    def to_text(self):
        return f"{_paren(self.left, SUM)} + {_paren(self.right, CONCAT)}"


@dataclass(frozen=True)
class Concat(Regex):
    left: Regex
    right: Regex
    level = CONCAT

    def to_text(self):
        return f"{_paren(self.left, CONCAT)} {_paren(self.right, FACTOR)}"


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex

    def to_text(self):
        return _paren(self.inner, FACTOR, allow_prefix=False) + "*"


def union(a: Regex, b: Regex) -> Regex:
    if isinstance(a, Empty):
        return b
    if isinstance(b, Empty) or a == b:
        return a
    return Union(a, b)


def concat(a: Regex, b: Regex) -> Regex:
    if isinstance(a, Empty) or isinstance(b, Empty):
        return Empty()
    if isinstance(a, Eps):
        return b
    if isinstance(b, Eps):
        return a
    return Concat(a, b)


def star(a: Regex) -> Regex:
    if isinstance(a, (Empty, Eps)):
        return Eps()
    if isinstance(a, Star):
        return a
    return Star(a)


def regex_to_nfa(r: Regex, alphabet: Sequence[str]) -> ClassicalNFA:
    """Thompson's construction."""
    alphabet = tuple(alphabet)
    transitions = []
    counter = [0]

    def fresh():
        counter[0] += 1
        return counter[0] - 1

    def build(node) -> tuple[int, int]:
        i, f = fresh(), fresh()
        if isinstance(node, Sym):
            if node.symbol not in alphabet:
                raise UnknownSymbolError(f"symbol {node.symbol!r} not in alphabet {alphabet}")
            transitions.append((i, node.symbol, f))
        elif isinstance(node, Eps):
            transitions.append((i, EPSILON, f))
        elif isinstance(node, Empty):
            pass
        elif isinstance(node, Union):
            for part in (node.left, node.right):
                a, b = build(part)
                transitions.extend([(i, EPSILON, a), (b, EPSILON, f)])
        elif isinstance(node, Concat):
            a1, b1 = build(node.left)
            a2, b2 = build(node.right)
            transitions.extend([(i, EPSILON, a1), (b1, EPSILON, a2), (b2, EPSILON, f)])
        elif isinstance(node, Star):
            a, b = build(node.inner)
            transitions.extend([(i, EPSILON, a), (b, EPSILON, f), (i, EPSILON, f), (b, EPSILON, a)])
        else:
            raise TypeError(f"not a classical regular expression: {node!r}")
        return i, f

    start, final = build(r)
    return ClassicalNFA(range(counter[0]), alphabet, transitions, [start], [final])


def _useful_states(d: ClassicalDFA) -> set:
    reach = {d.start}
    queue = deque([d.start])
    while queue:
        q = queue.popleft()
        for s in d.alphabet:
            p = d.delta[q][s]
            if p not in reach:
                reach.add(p)
                queue.append(p)
    pred: dict = {}
    for q in d.states:
        for s in d.alphabet:
            pred.setdefault(d.delta[q][s], set()).add(q)
    co = set(d.accepting)
    queue = deque(co)
    while queue:
        q = queue.popleft()
        for p in pred.get(q, ()):
            if p not in co:
                co.add(p)
                queue.append(p)
    return reach & co


def dfa_to_regex(d: ClassicalDFA) -> Regex:
    """State elimination, removing the lowest-degree state first."""
    useful = _useful_states(d)
    if d.start not in useful:
        return Empty()
    order = {q: i for i, q in enumerate(d.states)}
    S, F = ("start",), ("final",)
    edges: dict[tuple, Regex] = {(S, d.start): Eps()}
    for q in d.states:
        if q not in useful:
            continue
        for s in d.alphabet:
            p = d.delta[q][s]
            if p in useful:
                edges[(q, p)] = union(edges.get((q, p), Empty()), Sym(s))
        if q in d.accepting:
            edges[(q, F)] = Eps()
    remaining = set(useful)
    while remaining:
        def degree(x):
            return len({b for a, b in edges if a == x and b != x} | {a for a, b in edges if b == x and a != x})
        x = min(remaining, key=lambda q: (degree(q), order[q]))
        remaining.discard(x)
        loop = star(edges.pop((x, x), Empty()))
        ins = sorted(((a, r) for (a, b), r in edges.items() if b == x), key=lambda t: str(t[0]))
        outs = sorted(((b, r) for (a, b), r in edges.items() if a == x), key=lambda t: str(t[0]))
        for a, _ in ins:
            del edges[(a, x)]
        for b, _ in outs:
            del edges[(x, b)]
        for a, r_in in ins:
            for b, r_out in outs:
                edges[(a, b)] = union(edges.get((a, b), Empty()), concat(concat(r_in, loop), r_out))
    return edges.get((S, F), Empty())

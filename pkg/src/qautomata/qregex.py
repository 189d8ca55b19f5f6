"""Lattice-valued regular expressions.

Concrete syntax::

    expr   := term ('+' term)*
    term   := factor factor*             juxtaposition is concatenation
    factor := base '*'*
    base   := SYMBOL | '_eps' | '_empty' | '(' expr ')' | '[' ELEMENT ']' factor

A scalar prefix ``[k]`` applies to a single factor.  ``str()`` of an
expression re-parses to the same tree.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from . import qlang
from .classical import (
    FACTOR,
    Concat,
    Empty,
    Eps,
    Regex,
    Star,
    Sym,
    Union,
    _paren,
    dfa_to_regex,
    word_dfa,
)
from .errors import LatticeMismatchError, ParseError, ResourceCapError, UnknownSymbolError
from .oml import LValue, OrthomodularLattice
from .qfa import DEFAULT_STATE_CAP, _check_word, as_lvdfa
from .qlang import DEFAULT_ORACLE_BOUND, DEFAULT_STAR_COMPONENT_CAP, StepLanguage


@dataclass(frozen=True)
class Scalar(Regex):
    value: LValue
    inner: Regex
    level = FACTOR
    prefix = True

    def to_text(self):
        return f"[{self.value.name}]" + _paren(self.inner, FACTOR)


@dataclass(frozen=True)
class QRegex:
    """An expression tree bound to its lattice and alphabet."""

    root: Regex
    lattice: OrthomodularLattice
    alphabet: tuple

    def __str__(self):
        return self.root.to_text()


# ------------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<punct>[()+*])|\[(?P<elem>[^\]\[]*)\]|(?P<open>\[)|(?P<word>[^\s()+*\[\]]+))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group("open") is not None:
            raise ParseError("missing ']'", len(text))
        start = m.start(m.lastgroup)
        if m.group("punct"):
            tokens.append(("punct", m.group("punct"), start))
        elif m.group("elem") is not None:
            tokens.append(("elem", m.group("elem").strip(), start - 1))
        else:
            tokens.append(("word", m.group("word"), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def segment(word: str, alphabet: Sequence[str]) -> list[str] | None:
    """Split a run of characters into alphabet symbols, longest match first."""
    symbols = sorted(alphabet, key=len, reverse=True)
    out = []
    pos = 0
    while pos < len(word):
        for s in symbols:
            if word.startswith(s, pos):
                out.append(s)
                pos += len(s)
                break
        else:
            return None
    return out


class _Parser:
    def __init__(self, text, lattice, alphabet):
        self.tokens = _tokenize(text)
        self.i = 0
        self.lattice = lattice
        self.alphabet = alphabet

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}", pos)

    def starts_factor(self):
        kind, v, _ = self.peek()
        return kind in ("word", "elem") or (kind == "punct" and v == "(")

    def expr(self):
        node = self.term()
        while self.peek()[:2] == ("punct", "+"):
            self.take()
            node = Union(node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.starts_factor():
            node = Concat(node, self.factor())
        return node

    def factor(self):
        node = self.base()
        while self.peek()[:2] == ("punct", "*"):
            self.take()
            node = Star(node)
        return node

    def base(self):
        kind, v, pos = self.take()
        if kind == "word":
            if v == "_eps":
                return Eps()
            if v == "_empty":
                return Empty()
            if v in self.alphabet:
                return Sym(v)
            parts = segment(v, self.alphabet)
            if parts is None:
                raise ParseError(f"unknown symbol {v!r}", pos)
            # later pieces become separate factors so a trailing '*' binds only the last
            offsets = itertools.accumulate([pos] + [len(x) for x in parts[:-1]])
            self.tokens[self.i:self.i] = [("word", x, o) for x, o in zip(parts[1:], list(offsets)[1:])]
            return Sym(parts[0])
        if kind == "elem":
            try:
                value = self.lattice.value(v)
            except Exception:
                raise ParseError(f"unknown lattice element {v!r}", pos) from None
            return Scalar(value, self.factor())
        if (kind, v) == ("punct", "("):
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of expression", pos)
        raise ParseError(f"unexpected {v!r}", pos)


def parse(text: str, lattice: OrthomodularLattice, alphabet: Sequence[str]) -> QRegex:
    alphabet = tuple(alphabet)
    p = _Parser(text, lattice, alphabet)
    root = p.expr()
    kind, v, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {v!r}", pos)
    return QRegex(root, lattice, alphabet)


# --------------------------------------------------------------- denotation

def denote(e: QRegex, word, bound: int = DEFAULT_ORACLE_BOUND) -> LValue:
    """Direct evaluation of the expression's language at ``word``."""
    word = _check_word(e, word)
    if len(word) > bound:
        raise ResourceCapError(f"word length {len(word)} exceeds bound {bound}")
    lat = e.lattice
    zero, top = lat.bottom, lat.top
    memo: dict = {}

    def val(node, i, j) -> int:
        key = (id(node), i, j)
        if key in memo:
            return memo[key]
        if isinstance(node, Sym):
            out = top if j == i + 1 and word[i] == node.symbol else zero
        elif isinstance(node, Eps):
            out = top if i == j else zero
        elif isinstance(node, Empty):
            out = zero
        elif isinstance(node, Scalar):
            if node.value.lattice != lat:
                raise LatticeMismatchError("scalar from a different lattice")
            out = lat.meet(node.value.index, val(node.inner, i, j))
        elif isinstance(node, Union):
            out = lat.join(val(node.left, i, j), val(node.right, i, j))
        elif isinstance(node, Concat):
            out = lat.join_all(lat.meet(val(node.left, i, k), val(node.right, k, j))
                               for k in range(i, j + 1))
        elif isinstance(node, Star):
            out = _star_value(lambda a, b: val(node.inner, a, b), i, j, lat)
        else:
            raise TypeError(f"unknown expression node {node!r}")
        memo[key] = out
        return out

    return LValue(lat, val(e.root, 0, len(word)))


def _star_value(piece, i, j, lat) -> int:
    # explicit compositions: a ∧ (b ∨ c) does not distribute in general
    if i == j:
        return lat.top
    at_eps = piece(i, i)
    result = lat.bottom
    for cuts in itertools.product((False, True), repeat=j - i - 1):
        bounds = [i] + [i + k + 1 for k, c in enumerate(cuts) if c] + [j]
        v = lat.meet_all(piece(a, b) for a, b in zip(bounds, bounds[1:]))
        result = lat.join(result, lat.join(v, lat.meet(v, at_eps)))
    return result


# ---------------------------------------------------------------- compiling

def compile(e: QRegex, star_cap: int = DEFAULT_STAR_COMPONENT_CAP) -> StepLanguage:
    """Step language of the expression by structural recursion.

    Intermediate results are kept in canonical disjoint form so component
    counts stay at the number of distinct values.
    """
    lat, alphabet = e.lattice, e.alphabet

    def go(node) -> StepLanguage:
        if isinstance(node, Sym):
            if node.symbol not in alphabet:
                raise UnknownSymbolError(f"symbol {node.symbol!r} not in alphabet {alphabet}")
            return StepLanguage(lat, alphabet, [(lat.top, word_dfa((node.symbol,), alphabet))])
        if isinstance(node, Eps):
            return StepLanguage(lat, alphabet, [(lat.top, word_dfa((), alphabet))])
        if isinstance(node, Empty):
            return StepLanguage(lat, alphabet, [])
        if isinstance(node, Scalar):
            out = qlang.op_scalar(node.value, go(node.inner))
        elif isinstance(node, Union):
            out = qlang.op_union(go(node.left), go(node.right))
        elif isinstance(node, Concat):
            out = qlang.op_concat(go(node.left), go(node.right))
        elif isinstance(node, Star):
            out = qlang.op_star(go(node.inner), cap=star_cap)
        else:
            raise TypeError(f"unknown expression node {node!r}")
        return qlang.canonical(out)

    return go(e.root)


def extract(A, cap: int = DEFAULT_STATE_CAP) -> QRegex:
    """Expression ``k1 α1 + ... + kn αn`` from the disjoint step form of ``A``."""
    if isinstance(A, StepLanguage):
        step = qlang.to_disjoint(A)
    else:
        step = qlang.lvdfa_to_step(as_lvdfa(A, cap))
    lat = step.lattice
    terms = [Scalar(LValue(lat, k), dfa_to_regex(dfa)) for k, dfa in step.components]
    root = reduce(Union, terms) if terms else Empty()
    return QRegex(root, lat, step.alphabet)

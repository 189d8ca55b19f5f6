"""Finite orthomodular lattices.

A lattice is stored as an ordered element list plus a boolean order matrix.
Meet, join and orthocomplement are precomputed into integer tables when the
description is validated, so every downstream algorithm works on element
indices with O(1) lookups.  ``LValue`` wraps an index together with its
lattice for the public, name-level API.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DocumentError, LatticeAxiomError, LatticeMismatchError

DEFAULT_MAX_ELEMENTS = 4096
DEFAULT_MAX_WITNESSES = 20

ORDER_AXIOMS = ("reflexive", "antisymmetric", "transitive")
AXIOMS = ORDER_AXIOMS + (
    "bounded",
    "meet_exists",
    "join_exists",
    "ortho_involution",
    "ortho_antitone",
    "ortho_meet",
    "ortho_join",
    "orthomodular",
)


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[str, ...]

    def __str__(self):
        return f"{self.axiom}: ({', '.join(self.witness)})"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    lattice: OrthomodularLattice | None = None

    @property
    def passed(self) -> bool:
        return not self.violations

    def failed_axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def summary(self) -> str:
        if self.passed:
            return "valid orthomodular lattice"
        lines = [f"{len(self.violations)} axiom violation(s):"]
        lines += [f"  {v}" for v in self.violations]
        return "\n".join(lines)


@dataclass
class _Raw:
    name: str
    elements: list[str]
    leq: np.ndarray
    ortho: list[int]
    bottom: int
    top: int


class OrthomodularLattice:
    """A validated finite ortholattice with dense operation tables.

    Instances are immutable.  ``orthomodular`` is False only for lattices
    deliberately built without that law (the hexagon).
    """

    def __init__(self, name, elements, leq, ortho, bottom, top, meet_table, join_table,
                 orthomodular=True):
        self.name = name
        self.elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._leq_np = np.array(leq, dtype=bool)
        self._leq_np.setflags(write=False)
        self.leq_table = self._leq_np.tolist()
        self.ortho_table = list(ortho)
        self.meet_table = np.asarray(meet_table).tolist()
        self.join_table = np.asarray(join_table).tolist()
        self.bottom = bottom
        self.top = top
        self.orthomodular = orthomodular

    # identity is by name and structure, so two loads of one document agree
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, OrthomodularLattice):
            return NotImplemented
        return (self.name == other.name and self.elements == other.elements
                and self.ortho_table == other.ortho_table
                and np.array_equal(self._leq_np, other._leq_np))

    def __hash__(self):
        return hash((self.name, self.elements))

    def __repr__(self):
        return f"<OrthomodularLattice {self.name!r} with {len(self)} elements>"

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return (LValue(self, i) for i in range(len(self.elements)))

    def __getitem__(self, name: str) -> LValue:
        return LValue(self, self.index(name))

    def index(self, x) -> int:
        """Element index for a name, an ``LValue`` or an index."""
        if isinstance(x, LValue):
            if x.lattice != self:
                raise LatticeMismatchError(
                    f"value {x.name!r} belongs to lattice {x.lattice.name!r}, not {self.name!r}")
            return x.index
        if isinstance(x, str):
            try:
                return self._index[x]
            except KeyError:
                raise DocumentError(f"unknown element {x!r} in lattice {self.name!r}") from None
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            if 0 <= x < len(self.elements):
                return int(x)
        raise DocumentError(f"cannot interpret {x!r} as an element of {self.name!r}")

    def name_of(self, i: int) -> str:
        return self.elements[i]

    def value(self, x) -> LValue:
        return LValue(self, self.index(x))

    @property
    def zero(self) -> LValue:
        return LValue(self, self.bottom)

    @property
    def one(self) -> LValue:
        return LValue(self, self.top)

    # index-level operations, used by the automata code
    def leq(self, i: int, j: int) -> bool:
        return self.leq_table[i][j]

    def meet(self, i: int, j: int) -> int:
        return self.meet_table[i][j]

    def join(self, i: int, j: int) -> int:
        return self.join_table[i][j]

    def orth(self, i: int) -> int:
        return self.ortho_table[i]

    def meet_all(self, xs: Iterable[int]) -> int:
        acc = self.top
        m = self.meet_table
        for x in xs:
            acc = m[acc][x]
        return acc

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.bottom
        j = self.join_table
        for x in xs:
            acc = j[acc][x]
        return acc

    def meet_closure_idx(self, xs: Iterable[int]) -> frozenset[int]:
        return _closure(set(xs), self.meet_table, self.top)

    def join_closure_idx(self, xs: Iterable[int]) -> frozenset[int]:
        return _closure(set(xs), self.join_table, self.bottom)

    def covers(self) -> list[tuple[int, int]]:
        strict = self._leq_np & ~np.eye(len(self), dtype=bool)
        s = strict.astype(np.float32)
        between = (s @ s) > 0
        return [tuple(map(int, p)) for p in np.argwhere(strict & ~between)]

    def to_document(self) -> dict:
        return {
            "name": self.name,
            "elements": list(self.elements),
            "order_kind": "hasse",
            "order": [[self.elements[a], self.elements[b]] for a, b in self.covers()],
            "ortho": {e: self.elements[self.ortho_table[i]] for i, e in enumerate(self.elements)},
            "bottom": self.elements[self.bottom],
            "top": self.elements[self.top],
        }

    @classmethod
    def from_document(cls, doc: Mapping, max_elements: int = DEFAULT_MAX_ELEMENTS):
        """Parse and validate; raise ``LatticeAxiomError`` on any violation."""
        report = validate(doc, max_elements=max_elements)
        if not report.passed:
            raise LatticeAxiomError(report)
        return report.lattice


def _closure(xs: set[int], table, unit: int) -> frozenset[int]:
    closure = set(xs)
    frontier = list(closure)
    while frontier:
        fresh = []
        for a in frontier:
            row = table[a]
            for b in list(closure):
                c = row[b]
                if c not in closure:
                    closure.add(c)
                    fresh.append(c)
        frontier = fresh
    closure.add(unit)
    return frozenset(closure)


@dataclass(frozen=True, eq=True)
class LValue:
    """A truth value: an element of a specific lattice."""

    lattice: OrthomodularLattice
    index: int

    @property
    def name(self) -> str:
        return self.lattice.elements[self.index]

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"LValue({self.name!r})"

    def __and__(self, other):
        return meet(self, other)

    def __or__(self, other):
        return join(self, other)

    def __invert__(self):
        return ortho(self)

    def __le__(self, other):
        _check_same(self, other)
        return self.lattice.leq(self.index, other.index)

    def __ge__(self, other):
        return other.__le__(self)


def _check_same(*values: LValue) -> OrthomodularLattice:
    if not values:
        raise ValueError("at least one value is required")
    lat = values[0].lattice
    for v in values[1:]:
        if v.lattice is not lat and v.lattice != lat:
            raise LatticeMismatchError(
                f"cannot combine values of lattices {lat.name!r} and {v.lattice.name!r}")
    return lat


def meet(x: LValue, y: LValue) -> LValue:
    lat = _check_same(x, y)
    return LValue(lat, lat.meet(x.index, y.index))


def join(x: LValue, y: LValue) -> LValue:
    lat = _check_same(x, y)
    return LValue(lat, lat.join(x.index, y.index))


def ortho(x: LValue) -> LValue:
    return LValue(x.lattice, x.lattice.orth(x.index))


def sasaki_arrow(a: LValue, b: LValue) -> LValue:
    """``a -> b = a⊥ ∨ (a ∧ b)``; equals top exactly when ``a <= b``."""
    return join(ortho(a), meet(a, b))


def bi_implication(a: LValue, b: LValue) -> LValue:
    return meet(sasaki_arrow(a, b), sasaki_arrow(b, a))


def commutator(xs: Iterable[LValue]) -> LValue:
    """Join over all sign assignments of the meet of signed elements."""
    xs = list(dict.fromkeys(xs))
    if not xs:
        raise ValueError("commutator of an empty set is undefined")
    lat = _check_same(*xs)
    terms = []
    for signs in itertools.product((False, True), repeat=len(xs)):
        terms.append(lat.meet_all(lat.orth(x.index) if neg else x.index
                                  for x, neg in zip(xs, signs)))
    return LValue(lat, lat.join_all(terms))


def meet_closure(xs: Iterable[LValue], lattice: OrthomodularLattice | None = None) -> set[LValue]:
    """The meet-semilattice generated by ``xs``, including top."""
    xs = list(xs)
    lat = lattice or (_check_same(*xs) if xs else None)
    if lat is None:
        raise ValueError("lattice is required for an empty generating set")
    return {LValue(lat, i) for i in lat.meet_closure_idx(lat.index(x) for x in xs)}


def join_closure(xs: Iterable[LValue], lattice: OrthomodularLattice | None = None) -> set[LValue]:
    """The join-semilattice generated by ``xs``, including bottom."""
    xs = list(xs)
    lat = lattice or (_check_same(*xs) if xs else None)
    if lat is None:
        raise ValueError("lattice is required for an empty generating set")
    return {LValue(lat, i) for i in lat.join_closure_idx(lat.index(x) for x in xs)}


# ---------------------------------------------------------------- validation

def _parse_document(doc: Mapping, max_elements: int) -> _Raw:
    if not isinstance(doc, Mapping):
        raise DocumentError("lattice document must be a JSON object")
    try:
        elements = [str(e) for e in doc["elements"]]
        order = doc.get("order", [])
        ortho_map = doc["ortho"]
        bottom_name, top_name = doc["bottom"], doc["top"]
    except KeyError as exc:
        raise DocumentError(f"lattice document is missing field {exc.args[0]!r}") from None
    name = str(doc.get("name", "lattice"))
    kind = doc.get("order_kind", "hasse")
    if kind not in ("hasse", "leq"):
        raise DocumentError(f"order_kind must be 'hasse' or 'leq', got {kind!r}")
    if not elements:
        raise DocumentError("lattice has no elements")
    if len(elements) > max_elements:
        raise DocumentError(f"lattice has {len(elements)} elements, limit is {max_elements}")
    index = {}
    for i, e in enumerate(elements):
        if e in index:
            raise DocumentError(f"duplicate element name {e!r}")
        index[e] = i

    def lookup(e, where):
        try:
            return index[str(e)]
        except KeyError:
            raise DocumentError(f"unknown element {e!r} in {where}") from None

    n = len(elements)
    leq = np.zeros((n, n), dtype=bool)
    for pair in order:
        if len(pair) != 2:
            raise DocumentError(f"order entry {pair!r} is not a pair")
        leq[lookup(pair[0], "order"), lookup(pair[1], "order")] = True
    if kind == "hasse":
        leq |= np.eye(n, dtype=bool)
        for k in range(n):
            leq |= leq[:, [k]] & leq[[k], :]
    if not isinstance(ortho_map, Mapping):
        raise DocumentError("ortho must map every element to an element")
    ortho = [-1] * n
    for k, v in ortho_map.items():
        ortho[lookup(k, "ortho")] = lookup(v, "ortho")
    missing = [elements[i] for i in range(n) if ortho[i] < 0]
    if missing:
        raise DocumentError(f"ortho is not total: no image for {missing}")
    return _Raw(name, elements, leq, ortho, lookup(bottom_name, "bottom"), lookup(top_name, "top"))


def _raw_from_lattice(lat: OrthomodularLattice) -> _Raw:
    return _Raw(lat.name, list(lat.elements), lat._leq_np.copy(), list(lat.ortho_table),
                lat.bottom, lat.top)


def _meet_table(L: np.ndarray):
    """Greatest lower bounds by down-set size; ``ok`` marks pairs that have one."""
    n = len(L)
    down = L.sum(axis=0)
    cols = np.arange(n)
    meet_t = np.empty((n, n), dtype=np.int64)
    ok = np.empty((n, n), dtype=bool)
    for x in range(n):
        lb = L[:, [x]] & L
        m = np.where(lb, down[:, None], -1).argmax(axis=0)
        meet_t[x] = m
        ok[x] = lb[m, cols] & ~(lb & ~L[:, m]).any(axis=0)
    return meet_t, ok


def _analyse(raw: _Raw, max_witnesses: int | None):
    names = raw.elements
    L = raw.leq
    n = len(names)
    violations: list[Violation] = []

    def add(axiom, rows):
        rows = list(rows)
        if max_witnesses is not None:
            rows = rows[:max_witnesses]
        violations.extend(Violation(axiom, tuple(names[int(i)] for i in r)) for r in rows)

    add("reflexive", ((i,) for i in np.flatnonzero(~np.diag(L))))
    add("antisymmetric", np.argwhere(L & L.T & np.triu(np.ones((n, n), dtype=bool), 1)))
    f = L.astype(np.float32)
    bad = ((f @ f) > 0) & ~L
    add("transitive", ((x, int(np.argmax(L[x] & L[:, z])), z) for x, z in np.argwhere(bad)))
    add("bounded", ((i,) for i in np.flatnonzero(~L[raw.bottom] | ~L[:, raw.top])))
    o = np.array(raw.ortho)
    add("ortho_involution", ((i,) for i in np.flatnonzero(o[o] != np.arange(n))))
    add("ortho_antitone", np.argwhere(L & ~L[o][:, o].T))
    if violations and {v.axiom for v in violations} & set(ORDER_AXIOMS):
        return violations, None, None

    meet_t, meet_ok = _meet_table(L)
    join_t, join_ok = _meet_table(L.T)
    add("meet_exists", np.argwhere(~meet_ok))
    add("join_exists", np.argwhere(~join_ok))
    if not (meet_ok.all() and join_ok.all()):
        return violations, None, None

    idx = np.arange(n)
    add("ortho_meet", ((i,) for i in np.flatnonzero(meet_t[idx, o] != raw.bottom)))
    add("ortho_join", ((i,) for i in np.flatnonzero(join_t[idx, o] != raw.top)))
    # a <= b implies a ∨ (a⊥ ∧ b) = b
    inner = meet_t[o]
    law = join_t[idx[:, None], inner]
    add("orthomodular", np.argwhere(L & (law != idx[None, :])))
    return violations, meet_t, join_t


def validate(candidate, max_elements: int = DEFAULT_MAX_ELEMENTS,
             max_witnesses: int | None = DEFAULT_MAX_WITNESSES) -> ValidationReport:
    """Check a lattice document (or lattice object) against every axiom.

    Malformed documents raise ``DocumentError``; axiom failures are reported
    with witnesses.  A passing report carries the built lattice.
    """
    if isinstance(candidate, OrthomodularLattice):
        raw = _raw_from_lattice(candidate)
    else:
        raw = _parse_document(candidate, max_elements)
    violations, meet_t, join_t = _analyse(raw, max_witnesses)
    report = ValidationReport(violations)
    if report.passed:
        report.lattice = OrthomodularLattice(raw.name, raw.elements, raw.leq, raw.ortho,
                                             raw.bottom, raw.top, meet_t, join_t)
    return report


# ------------------------------------------------------------------ builders

def boolean_document(n: int, atoms: Sequence[str] | None = None, name: str | None = None) -> dict:
    if n < 1:
        raise ValueError("boolean lattice needs at least one atom")
    atoms = list(atoms) if atoms is not None else [f"x{i + 1}" for i in range(n)]
    if len(atoms) != n:
        raise ValueError("atom name count does not match n")
    full = (1 << n) - 1
    masks = sorted(range(1 << n), key=lambda m: (bin(m).count("1"), [-(m >> i & 1) for i in range(n)]))

    def label(m):
        if m == 0:
            return "0"
        if m == full:
            return "1"
        return "∨".join(atoms[i] for i in range(n) if m >> i & 1)

    order = [[label(m), label(m | 1 << i)] for m in masks for i in range(n) if not m >> i & 1]
    return {
        "name": name or f"boolean:{n}",
        "elements": [label(m) for m in masks],
        "order_kind": "hasse",
        "order": order,
        "ortho": {label(m): label(full ^ m) for m in masks},
        "bottom": "0",
        "top": "1",
    }


def _atom_names(n: int) -> list[str]:
    if n <= 26:
        return list(string.ascii_lowercase[:n])
    return [f"a{i + 1}" for i in range(n)]


def mo_document(n: int) -> dict:
    if n < 1:
        raise ValueError("MO(n) needs n >= 1")
    elements = ["0"]
    ortho = {"0": "1", "1": "0"}
    order = []
    for a in _atom_names(n):
        elements += [a, a + "⊥"]
        ortho[a], ortho[a + "⊥"] = a + "⊥", a
        order += [["0", a], [a, "1"], ["0", a + "⊥"], [a + "⊥", "1"]]
    elements.append("1")
    return {"name": f"mo:{n}", "elements": elements, "order_kind": "hasse", "order": order,
            "ortho": ortho, "bottom": "0", "top": "1"}


def hexagon_document() -> dict:
    return {
        "name": "hexagon",
        "elements": ["0", "a", "b", "a⊥", "b⊥", "1"],
        "order_kind": "hasse",
        "order": [["0", "a"], ["a", "b⊥"], ["b⊥", "1"], ["0", "b"], ["b", "a⊥"], ["a⊥", "1"]],
        "ortho": {"0": "1", "1": "0", "a": "a⊥", "a⊥": "a", "b": "b⊥", "b⊥": "b"},
        "bottom": "0",
        "top": "1",
    }


def example21_document() -> dict:
    return boolean_document(4, atoms=("a00", "a01", "a10", "a11"), name="example21")


def parse_builder_spec(spec: str) -> tuple[str, int | None]:
    kind, _, arg = spec.partition(":")
    if kind in ("boolean", "mo"):
        try:
            n = int(arg)
        except ValueError:
            raise DocumentError(f"builder {spec!r} needs an integer size, e.g. {kind}:2") from None
        if n < 1:
            raise DocumentError(f"builder {spec!r}: n must be at least 1")
        return kind, n
    if kind in ("hexagon", "example21") and not arg:
        return kind, None
    raise DocumentError(f"unknown lattice builder {spec!r}")


def standard_document(spec: str, n: int | None = None) -> dict:
    """Raw document for ``boolean:n``, ``mo:n``, ``hexagon`` or ``example21``."""
    if n is not None:
        spec = f"{spec}:{n}"
    kind, n = parse_builder_spec(spec)
    if kind == "boolean":
        return boolean_document(n)
    if kind == "mo":
        return mo_document(n)
    if kind == "hexagon":
        return hexagon_document()
    return example21_document()


def is_builder_spec(spec: str) -> bool:
    try:
        parse_builder_spec(spec)
    except DocumentError:
        return False
    return True


@lru_cache(maxsize=None)
def _build_cached(spec: str) -> OrthomodularLattice:
    doc = standard_document(spec)
    if parse_builder_spec(spec)[0] != "hexagon":
        return OrthomodularLattice.from_document(doc)
    raw = _parse_document(doc, DEFAULT_MAX_ELEMENTS)
    violations, meet_t, join_t = _analyse(raw, None)
    assert {v.axiom for v in violations} == {"orthomodular"}
    return OrthomodularLattice(raw.name, raw.elements, raw.leq, raw.ortho, raw.bottom, raw.top,
                               meet_t, join_t, orthomodular=False)


def build_standard(kind: str, n: int | None = None) -> OrthomodularLattice:
    """Standard lattices; the hexagon is returned as a non-orthomodular ortholattice.

    >>> len(build_standard("mo", 2))
    6
    """
    spec = f"{kind}:{n}" if n is not None else kind
    kind, n = parse_builder_spec(spec)
    return _build_cached(kind if n is None else f"{kind}:{n}")


def boolean(n: int) -> OrthomodularLattice:
    return build_standard("boolean", n)


def mo(n: int) -> OrthomodularLattice:
    return build_standard("mo", n)


def hexagon() -> OrthomodularLattice:
    return build_standard("hexagon")


def example21() -> OrthomodularLattice:
    return build_standard("example21")

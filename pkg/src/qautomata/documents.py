"""JSON documents for lattices, automata and step languages.

Lattice references inside automaton and step documents are either a builder
spec (``boolean:3``, ``mo:2``, ``hexagon``, ``example21``), a path relative to
the referring document, or an inline lattice document.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Mapping

from .classical import EPSILON, ClassicalDFA
from .errors import DocumentError
from .oml import OrthomodularLattice, build_standard, is_builder_spec, standard_document, validate
from .qfa import LVDFA, LVFA, LVFAEps
from .qlang import MooreMachine, StepLanguage

FIXTURES = ("example21.json", "example21_printed.json")


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("qautomata") / "fixtures" / name))


def resolve_path(path) -> Path:
    """``path`` itself, or the packaged fixture of that name if absent."""
    p = Path(path)
    if not p.exists() and p.name in FIXTURES and p.name == str(path):
        return fixture_path(p.name)
    return p


def read_json(path) -> dict:
    p = resolve_path(path)
    try:
        with open(p, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise DocumentError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc})") from None


def write_json(doc, path=None) -> str:
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# ------------------------------------------------------------------ lattices

def lattice_document(selector, base_dir: Path | None = None) -> dict:
    """Raw (unvalidated) lattice document for a selector."""
    if isinstance(selector, Mapping):
        return dict(selector)
    if is_builder_spec(selector):
        return standard_document(selector)
    path = Path(selector)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    return read_json(path)


def load_lattice(selector, base_dir: Path | None = None) -> OrthomodularLattice:
    if isinstance(selector, OrthomodularLattice):
        return selector
    if isinstance(selector, str) and is_builder_spec(selector):
        return build_standard(selector)
    return OrthomodularLattice.from_document(lattice_document(selector, base_dir))


def lattice_reference(lat: OrthomodularLattice):
    """Builder name when ``lat`` is a standard lattice, else an inline document."""
    if is_builder_spec(lat.name) and lat.name != "hexagon" and build_standard(lat.name) == lat:
        return lat.name
    return lat.to_document()


# ------------------------------------------------------------------ automata

def automaton_from_document(doc: Mapping, base_dir: Path | None = None):
    try:
        kind = doc["kind"]
        lat = load_lattice(doc["lattice"], base_dir)
        states = [str(q) for q in doc["states"]]
        alphabet = [str(s) for s in doc["alphabet"]]
    except KeyError as exc:
        raise DocumentError(f"automaton document is missing field {exc.args[0]!r}") from None
    transitions = doc.get("transitions", [])
    final = doc.get("final", {})
    try:
        if kind == "lvdfa":
            delta: dict = {q: {} for q in states}
            for t in transitions:
                if t["from"] not in delta:
                    raise DocumentError(f"transition from unknown state {t['from']!r}")
                if t["symbol"] in delta[t["from"]]:
                    raise DocumentError(f"state {t['from']!r} has two transitions on {t['symbol']!r}")
                if "value" in t and lat.index(t["value"]) != lat.top:
                    raise DocumentError("deterministic transitions must be crisp (value top)")
                delta[t["from"]][t["symbol"]] = t["to"]
            if "q0" not in doc:
                raise DocumentError("lvdfa document needs 'q0'")
            return LVDFA(lat, states, alphabet, delta, doc["q0"], final)
        if kind not in ("lvfa", "lvfa_eps"):
            raise DocumentError(f"unknown automaton kind {kind!r}")
        delta = {}
        for t in transitions:
            key = (t["from"], t["symbol"], t["to"])
            value = t.get("value", lat.elements[lat.top])
            delta[key] = lat.join(delta.get(key, lat.bottom), lat.index(value))
        if "initial" in doc:
            initial = doc["initial"]
        elif "q0" in doc:
            initial = {doc["q0"]: lat.elements[lat.top]}
        else:
            initial = {}
        cls = LVFA if kind == "lvfa" else LVFAEps
        return cls(lat, states, alphabet, delta, initial, final)
    except KeyError as exc:
        raise DocumentError(f"transition is missing field {exc.args[0]!r}") from None


def automaton_to_document(machine) -> dict:
    lat = machine.lattice
    name = lat.name_of
    order = {q: i for i, q in enumerate(machine.states)}
    doc = {"lattice": lattice_reference(lat)}
    if isinstance(machine, LVDFA):
        doc.update(
            kind="lvdfa",
            states=[str(q) for q in machine.states],
            alphabet=list(machine.alphabet),
            transitions=[{"from": str(q), "symbol": s, "to": str(machine.delta[q][s])}
                         for q in machine.states for s in machine.alphabet],
            q0=str(machine.q0),
            final={str(q): name(machine.final_value(q)) for q in machine.states},
        )
        if machine.annotations:
            doc["annotations"] = {str(q): str(z) for q, z in machine.annotations.items()}
        return doc
    kind = "lvfa" if isinstance(machine, LVFA) else "lvfa_eps"
    triples = sorted(machine.delta.items(),
                     key=lambda kv: (order[kv[0][0]], kv[0][1], order[kv[0][2]]))
    doc.update(
        kind=kind,
        states=[str(q) for q in machine.states],
        alphabet=list(machine.alphabet),
        transitions=[{"from": str(p), "symbol": s, "to": str(q), "value": name(v)}
                     for (p, s, q), v in triples],
        initial={str(q): name(v) for q, v in sorted(machine.initial.items(), key=lambda kv: order[kv[0]])},
        final={str(q): name(v) for q, v in sorted(machine.final.items(), key=lambda kv: order[kv[0]])},
    )
    return doc


# ----------------------------------------------------------- step languages

def step_from_document(doc: Mapping, base_dir: Path | None = None) -> StepLanguage:
    try:
        lat = load_lattice(doc["lattice"], base_dir)
        alphabet = [str(s) for s in doc["alphabet"]]
        comps = [(c["value"], ClassicalDFA.from_document(c["dfa"], alphabet))
                 for c in doc["components"]]
    except KeyError as exc:
        raise DocumentError(f"step-language document is missing field {exc.args[0]!r}") from None
    return StepLanguage(lat, alphabet, comps)


def step_to_document(S: StepLanguage) -> dict:
    lat = S.lattice
    comps = sorted(S.components, key=lambda c: lat.name_of(c[0]))
    return {
        "lattice": lattice_reference(lat),
        "alphabet": list(S.alphabet),
        "components": [{"value": lat.name_of(k), "dfa": dfa.to_document()} for k, dfa in comps],
    }


def moore_to_document(M: MooreMachine) -> dict:
    return automaton_to_document(M.to_lvdfa())


def load(path):
    """Load any document; returns a lattice, automaton or step language."""
    doc = read_json(path)
    base = resolve_path(path).parent
    try:
        if "components" in doc:
            return step_from_document(doc, base)
        if "kind" in doc:
            return automaton_from_document(doc, base)
        return OrthomodularLattice.from_document(doc)
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc}") from None


def dump(obj) -> dict:
    if isinstance(obj, StepLanguage):
        return step_to_document(obj)
    if isinstance(obj, MooreMachine):
        return moore_to_document(obj)
    if isinstance(obj, OrthomodularLattice):
        return obj.to_document()
    if isinstance(obj, ClassicalDFA):
        return obj.to_document()
    return automaton_to_document(obj)


__all__ = [
    "EPSILON",
    "automaton_from_document",
    "automaton_to_document",
    "dump",
    "fixture_path",
    "lattice_document",
    "load",
    "load_lattice",
    "read_json",
    "step_from_document",
    "step_to_document",
    "validate",
    "write_json",
]

"""Command-line front end.

Exit status: 0 success, 1 semantic failure (invalid lattice, not
equivalent), 2 input error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import oml, qfa, qlang, qregex
from .documents import dump, lattice_document, load, load_lattice, write_json
from .errors import QAutomataError, ResourceCapError
from .qlang import StepLanguage

CAP_ENV = "QAUTOMATA_STATE_CAP"
EMPTY_WORDS = ("", "ε", "_eps")


class InputError(QAutomataError):
    pass


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return qfa.DEFAULT_STATE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"{CAP_ENV}={raw!r} is not an integer") from None
    if cap <= 0:
        raise InputError(f"{CAP_ENV} must be positive")
    return cap


def parse_word(text: str, alphabet) -> tuple:
    """Comma-separated symbols, or a run of symbols split by longest match."""
    if text in EMPTY_WORDS:
        return ()
    if "," in text:
        parts = [p for p in text.split(",") if p]
    else:
        parts = qregex.segment(text, alphabet)
        if parts is None:
            raise InputError(f"word {text!r} is not a sequence of symbols from {list(alphabet)}")
    unknown = [p for p in parts if p not in alphabet]
    if unknown:
        raise InputError(f"symbol {unknown[0]!r} not in alphabet {list(alphabet)}")
    return tuple(parts)


def parse_alphabet(text: str) -> list[str]:
    symbols = [s for s in text.split(",") if s] if "," in text else list(text)
    if not symbols:
        raise InputError("alphabet is empty")
    return symbols


def format_word(word) -> str:
    if not word:
        return "ε"
    if all(len(s) == 1 for s in word):
        return "".join(word)
    return ",".join(word)


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


# ----------------------------------------------------------------- loaders

def _load_kind(path, *kinds):
    obj = load(path)
    if not isinstance(obj, kinds):
        names = " or ".join(k.__name__ for k in kinds)
        raise InputError(f"{path}: expected {names}, got {type(obj).__name__}")
    return obj


def _automaton(path):
    return _load_kind(path, qfa.LVFAEps, qfa.LVDFA)


def _language(path, cap) -> StepLanguage:
    obj = _load_kind(path, StepLanguage, qfa.LVFAEps, qfa.LVDFA)
    if isinstance(obj, StepLanguage):
        return obj
    return qlang.lvdfa_to_step(qfa.as_lvdfa(obj, cap))


def _emit(args, doc, out):
    text = write_json(doc, args.output)
    if args.output is None:
        out.write(text)


# ---------------------------------------------------------------- commands

def cmd_lattice_validate(args, out):
    report = oml.validate(lattice_document(args.lattice))
    out.write(report.summary() + "\n")
    return 0 if report.passed else 1


def cmd_lattice_commutator(args, out):
    lat = load_lattice(args.lattice)
    values = [lat.value(e) for e in args.elements]
    out.write(oml.commutator(values).name + "\n")
    return 0


def cmd_fa_eval(args, out):
    A = _automaton(args.automaton)
    word = parse_word(args.word, A.alphabet)
    if isinstance(A, qfa.LVDFA):
        value = qfa.eval_dfa(A, word)
    else:
        value = qfa.eval_dfa(qfa.as_lvdfa(A, args.cap), word)
    out.write(value.name + "\n")
    return 0


def cmd_fa_eval_oracle(args, out):
    A = _automaton(args.automaton)
    word = parse_word(args.word, A.alphabet)
    if len(word) > args.max_word_len:
        raise ResourceCapError(f"word length {len(word)} exceeds --max-word-len {args.max_word_len}")
    if isinstance(A, qfa.LVDFA):
        value = qfa.eval_dfa(A, word)
    elif A.has_epsilon:
        value = qfa.eval_eps_paths(A, word)
    else:
        value = qfa.eval_nfa_paths(A, word)
    out.write(value.name + "\n")
    return 0


def cmd_fa_determinize(args, out):
    A = _automaton(args.automaton)
    _emit(args, dump(qfa.as_lvdfa(A, args.cap)), out)
    return 0


def cmd_fa_rm_eps(args, out):
    A = _automaton(args.automaton)
    if isinstance(A, qfa.LVDFA):
        raise InputError(f"{args.automaton}: already deterministic")
    _emit(args, dump(qfa.remove_epsilon(qfa.crispify_eps(A, args.cap))), out)
    return 0


def cmd_fa_pump(args, out):
    D = qfa.as_lvdfa(_automaton(args.automaton), args.cap)
    word = parse_word(args.word, D.alphabet)
    try:
        d = qfa.pump_decompose(D, word)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.write(f"u={format_word(d.u)} v={format_word(d.v)} w={format_word(d.w)}\n")
    out.write(f"value={qfa.eval_dfa(D, word).name}\n")
    return 0


def cmd_lang_decompose(args, out):
    D = qfa.as_lvdfa(_automaton(args.automaton), args.cap)
    _emit(args, dump(qlang.lvdfa_to_step(D)), out)
    return 0


UNARY_OPS = {"complement", "star"}
BINARY_OPS = {"union", "intersect", "concat"}


def cmd_lang_op(args, out):
    op, operands = args.op, args.operands
    if op == "scalar":
        if len(operands) != 2:
            raise InputError("scalar takes an element and one language")
        A = _language(operands[1], args.cap)
        result = qlang.op_scalar(A.lattice.value(operands[0]), A)
    elif op in UNARY_OPS:
        if len(operands) != 1:
            raise InputError(f"{op} takes one language")
        A = _language(operands[0], args.cap)
        if op == "star":
            result = qlang.op_star(A, cap=args.star_cap)
        else:
            result = qlang.op_complement(A)
    else:
        if len(operands) != 2:
            raise InputError(f"{op} takes two languages")
        A, B = (_language(p, args.cap) for p in operands)
        fn = {"union": qlang.op_union, "intersect": qlang.op_intersect, "concat": qlang.op_concat}[op]
        result = fn(A, B)
    _emit(args, dump(qlang.canonical(result)), out)
    return 0


def cmd_lang_equiv(args, out):
    A = _language(args.left, args.cap)
    B = _language(args.right, args.cap)
    result = qlang.equivalent(A, B)
    if result:
        out.write("equivalent\n")
        return 0
    w = result.counterexample
    out.write(f"not equivalent: counterexample {format_word(w)} "
              f"({A.evaluate(w).name} vs {B.evaluate(w).name})\n")
    return 1


def cmd_lang_cut(args, out):
    S = _language(args.step, args.cap)
    fn = qlang.cut if args.command == "cut" else qlang.level
    _emit(args, dump(fn(S, S.lattice.value(args.element))), out)
    return 0


def cmd_lang_eval(args, out):
    S = _language(args.step, args.cap)
    out.write(S.evaluate(parse_word(args.word, S.alphabet)).name + "\n")
    return 0


def cmd_regex_compile(args, out):
    lat = load_lattice(args.lattice)
    e = qregex.parse(args.expr, lat, parse_alphabet(args.alphabet))
    _emit(args, dump(qregex.compile(e, star_cap=args.star_cap)), out)
    return 0


def cmd_regex_extract(args, out):
    obj = _load_kind(args.automaton, StepLanguage, qfa.LVFAEps, qfa.LVDFA)
    out.write(str(qregex.extract(obj, cap=args.cap)) + "\n")
    return 0


def cmd_regex_denote(args, out):
    lat = load_lattice(args.lattice)
    alphabet = parse_alphabet(args.alphabet)
    e = qregex.parse(args.expr, lat, alphabet)
    word = parse_word(args.word, alphabet)
    out.write(qregex.denote(e, word, bound=args.max_word_len).name + "\n")
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=_positive, default=None,
                        help=f"state cap for constructions (default ${CAP_ENV} or {qfa.DEFAULT_STATE_CAP})")
    common.add_argument("--max-word-len", type=_positive, default=qlang.DEFAULT_ORACLE_BOUND,
                        help="longest word accepted by the brute-force oracles")
    common.add_argument("--star-cap", type=_positive, default=qlang.DEFAULT_STAR_COMPONENT_CAP,
                        help="most components a star operand may have")
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("-o", "--output", default=None, help="write JSON here instead of stdout")

    parser = argparse.ArgumentParser(prog="qautomata", description="Lattice-valued automata toolkit.")
    groups = parser.add_subparsers(dest="group", required=True)

    def command(group, name, fn, parents=(common,), **kw):
        p = group.add_parser(name, parents=list(parents), **kw)
        p.set_defaults(fn=fn)
        return p

    lat = groups.add_parser("lattice", help="lattice checks").add_subparsers(dest="command", required=True)
    p = command(lat, "validate", cmd_lattice_validate, help="check the orthomodular lattice axioms")
    p.add_argument("lattice", help="builder spec (boolean:n, mo:n, hexagon, example21) or JSON file")
    p = command(lat, "commutator", cmd_lattice_commutator, help="commutator of a set of elements")
    p.add_argument("lattice")
    p.add_argument("elements", nargs="+")

    fa = groups.add_parser("fa", help="automata").add_subparsers(dest="command", required=True)
    for name, fn, hint in (("eval", cmd_fa_eval, "evaluate via determinization"),
                           ("eval-oracle", cmd_fa_eval_oracle, "evaluate by path enumeration")):
        p = command(fa, name, fn, help=hint)
        p.add_argument("automaton")
        p.add_argument("word")
    for name, fn, hint in (("determinize", cmd_fa_determinize, "quantum subset construction"),
                           ("rm-eps", cmd_fa_rm_eps, "crisp ε-free equivalent")):
        p = command(fa, name, fn, parents=(common, output), help=hint)
        p.add_argument("automaton")
    p = command(fa, "pump", cmd_fa_pump, help="pumping decomposition of a word")
    p.add_argument("automaton")
    p.add_argument("word")

    lang = groups.add_parser("lang", help="step languages").add_subparsers(dest="command", required=True)
    p = command(lang, "decompose", cmd_lang_decompose, parents=(common, output),
                help="step decomposition of an automaton")
    p.add_argument("automaton")
    p = command(lang, "op", cmd_lang_op, parents=(common, output), help="closure operations")
    p.add_argument("op", choices=sorted(UNARY_OPS | BINARY_OPS | {"scalar"}))
    p.add_argument("operands", nargs="+", help="documents; scalar takes ELEMENT then a document")
    p = command(lang, "equiv", cmd_lang_equiv, help="pointwise equality")
    p.add_argument("left")
    p.add_argument("right")
    for name in ("cut", "level"):
        p = command(lang, name, cmd_lang_cut, parents=(common, output), help=f"classical {name} language")
        p.add_argument("step")
        p.add_argument("element")
    p = command(lang, "eval", cmd_lang_eval, help="evaluate a language at a word")
    p.add_argument("step")
    p.add_argument("word")

    rx = groups.add_parser("regex", help="expressions").add_subparsers(dest="command", required=True)
    p = command(rx, "compile", cmd_regex_compile, parents=(common, output), help="expression to step language")
    p.add_argument("lattice")
    p.add_argument("alphabet", help="comma-separated symbols, or one symbol per character")
    p.add_argument("expr")
    p = command(rx, "extract", cmd_regex_extract, help="automaton to expression")
    p.add_argument("automaton")
    p = command(rx, "denote", cmd_regex_denote, help="evaluate an expression directly")
    p.add_argument("lattice")
    p.add_argument("alphabet")
    p.add_argument("expr")
    p.add_argument("word")
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.cap is None:
            args.cap = default_cap()
        return args.fn(args, out)
    except ResourceCapError as exc:
        err.write(f"error: resource cap: {exc}\n")
        return 3
    except (QAutomataError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

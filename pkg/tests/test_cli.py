import io
import json
import subprocess
import sys

from qautomata import documents, qfa, qlang, qregex
from qautomata.cli import format_word, parse_word, run
from qautomata.randgen import words


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_eval_example21():
    code, out, _ = call("fa", "eval", "example21.json", "σ")
    assert (code, out) == (0, "a00∨a01∨a10\n")
    code, out, _ = call("fa", "eval-oracle", "example21.json", "σσ")
    assert (code, out) == (0, "a01∨a10\n")
    assert call("fa", "eval", "example21.json", "ε")[1] == "a01∨a10\n"


def test_validate():
    code, out, _ = call("lattice", "validate", "hexagon")
    assert code == 1 and "orthomodular: (a, b⊥)" in out
    assert call("lattice", "validate", "mo:3")[0] == 0
    assert call("lattice", "commutator", "mo:2", "a", "b")[1] == "0\n"


def test_determinize_and_decompose_files(tmp_path):
    dfa_path, step_path = tmp_path / "d.json", tmp_path / "s.json"
    assert call("fa", "determinize", "example21.json", "-o", str(dfa_path))[0] == 0
    D = documents.load(dfa_path)
    assert D.states == ("p0", "p1", "p2")
    assert call("lang", "decompose", str(dfa_path), "-o", str(step_path))[0] == 0
    S = documents.load(step_path)
    assert all(S(w) == qfa.eval_dfa(D, w) for w in words(("σ",), 6))
    assert call("lang", "equiv", str(step_path), str(step_path)) == (0, "equivalent\n", "")
    assert call("lang", "equiv", str(step_path), "example21.json")[0] == 0
    code, out, _ = call("lang", "equiv", str(step_path), "example21_printed.json")
    assert code == 1 and "counterexample ε" in out


def test_rm_eps_round_trip(tmp_path):
    path = tmp_path / "c.json"
    assert call("fa", "rm-eps", "example21.json", "-o", str(path))[0] == 0
    A, B = documents.load("example21.json"), documents.load(path)
    assert not B.has_epsilon
    assert all(qfa.evaluate(A, w) == qfa.evaluate(B, w) for w in words(("σ",), 5))


def test_pump():
    code, out, _ = call("fa", "pump", "example21.json", "σσσ")
    assert code == 0 and out.splitlines()[-1] == "value=a01∨a10"
    assert call("fa", "pump", "example21.json", "σ")[0] == 2


def test_regex_commands(tmp_path):
    path = tmp_path / "c.json"
    expr = "[a00∨a01∨a10]σ + [a01∨a10]σσ* + [a01∨a10]_eps"
    assert call("regex", "compile", "example21", "σ", expr, "-o", str(path))[0] == 0
    assert call("lang", "equiv", str(path), "example21.json")[0] == 0
    code, out, _ = call("regex", "extract", "example21.json")
    lat = documents.load("example21.json").lattice
    assert qlang.equivalent(qregex.compile(qregex.parse(out.strip(), lat, ("σ",))), documents.load(path))
    assert call("regex", "denote", "mo:2", "a,b", "[a]a*", "aa")[1] == "a\n"


def test_lang_ops(tmp_path):
    x, y = tmp_path / "x.json", tmp_path / "y.json"
    call("regex", "compile", "mo:2", "ab", "[a]a", "-o", str(x))
    call("regex", "compile", "mo:2", "ab", "[b]b*", "-o", str(y))
    results = {}
    for op, args in [("union", [x, y]), ("intersect", [x, y]), ("concat", [x, y]),
                     ("complement", [x]), ("star", [y]), ("scalar", ["a⊥", y])]:
        out = tmp_path / f"{op}.json"
        assert call("lang", "op", op, *map(str, args), "-o", str(out))[0] == 0
        results[op] = documents.load(out)
    X, Y = documents.load(x), documents.load(y)
    lat = X.lattice
    for w in words(("a", "b"), 4):
        assert results["union"](w) == X(w) | Y(w)
        assert results["intersect"](w) == X(w) & Y(w)
        assert results["complement"](w) == ~X(w)
        assert results["scalar"](w) == lat["a⊥"] & Y(w)
        assert results["star"](w) == qlang.star_oracle(Y, w)
    assert results["concat"]("abb") == lat["a"] & lat["b"]
    assert call("lang", "op", "union", str(x))[0] == 2
    assert call("lang", "eval", str(x), "a")[1] == "a\n"


def test_cut_and_level(tmp_path):
    step = tmp_path / "s.json"
    call("lang", "decompose", "example21.json", "-o", str(step))
    code, out, _ = call("lang", "level", str(step), "a00∨a01∨a10")
    assert code == 0
    dfa = json.loads(out)
    assert dfa["accepting"] and set(dfa) == {"states", "start", "accepting", "delta"}
    assert call("lang", "cut", str(step), "a01")[0] == 0


def test_input_errors(tmp_path):
    assert call("fa", "eval", str(tmp_path / "missing.json"), "σ")[0] == 2
    code, _, err = call("fa", "eval", "example21.json", "x")
    assert code == 2 and "x" in err
    code, _, err = call("regex", "compile", "mo:2", "ab", "[a a")
    assert code == 2 and "offset 4" in err
    assert call("nonsense")[0] == 2
    assert call("lattice", "validate", "mo:0")[0] == 2
    assert call("fa", "eval", "example21.json", "σ", "--cap", "0")[0] == 2


def test_resource_caps(monkeypatch):
    assert call("fa", "eval", "example21.json", "σ", "--cap", "1")[0] == 3
    monkeypatch.setenv("QAUTOMATA_STATE_CAP", "1")
    assert call("fa", "eval", "example21.json", "σ")[0] == 3
    monkeypatch.setenv("QAUTOMATA_STATE_CAP", "1000")
    assert call("fa", "eval", "example21.json", "σ")[0] == 0
    assert call("fa", "eval-oracle", "example21.json", "σσσ", "--max-word-len", "2")[0] == 3


def test_word_syntax():
    assert parse_word("ε", ["a"]) == ()
    assert parse_word("up,down", ["up", "down"]) == ("up", "down")
    assert parse_word("updown", ["up", "down"]) == ("up", "down")
    assert format_word(("up", "down")) == "up,down" and format_word(("a", "b")) == "ab"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qautomata", "fa", "eval", "example21.json", "σ"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "a00∨a01∨a10\n"

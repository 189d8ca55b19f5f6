import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qautomata import oml, qfa, qlang, qregex
from qautomata.classical import Concat, Empty, Eps, Star, Sym, Union
from qautomata.errors import ParseError, ResourceCapError
from qautomata.qregex import Scalar
from qautomata.randgen import random_expression, random_lvfa, words

AB = ("a", "b")


@pytest.fixture
def m2():
    return oml.mo(2)


def test_parse_shapes(m2):
    e = qregex.parse("[a](a b)* + [b] a", m2, AB)
    assert e.root == Union(Scalar(m2["a"], Star(Concat(Sym("a"), Sym("b")))), Scalar(m2["b"], Sym("a")))
    assert qregex.parse("_empty", m2, AB).root == Empty()
    assert qregex.parse("_eps", m2, AB).root == Eps()


def test_parse_splits_runs_of_symbols(m2):
    assert qregex.parse("ab*", m2, AB).root == Concat(Sym("a"), Star(Sym("b")))
    multi = qregex.parse("up down*", m2, ("up", "down"))
    assert multi.root == Concat(Sym("up"), Star(Sym("down")))


def test_parse_errors(m2):
    with pytest.raises(ParseError) as err:
        qregex.parse("[a a", m2, AB)
    assert err.value.position == 4
    with pytest.raises(ParseError):
        qregex.parse("[nope]a", m2, AB)
    with pytest.raises(ParseError):
        qregex.parse("a + ", m2, AB)
    with pytest.raises(ParseError):
        qregex.parse("(a", m2, AB)
    with pytest.raises(ParseError):
        qregex.parse("c", m2, AB)


def test_printing_round_trips():
    rng = random.Random(1)
    for spec in ("mo:2", "boolean:2", "example21"):
        lat = oml.build_standard(spec)
        for _ in range(80):
            e = random_expression(rng, lat, depth=4)
            assert qregex.parse(str(e), lat, AB).root == e.root


def test_denote_examples(m2):
    eps = qregex.parse("_eps", m2, AB)
    assert qregex.denote(eps, "") == m2.one
    assert qregex.denote(eps, "a") == m2.zero
    assert qregex.denote(qregex.parse("[a]a", m2, AB), "a") == m2["a"]
    assert qregex.denote(qregex.parse("[a]a + [b]a", m2, AB), "a") == m2["a"] | m2["b"]


def test_denote_bound(m2):
    with pytest.raises(ResourceCapError):
        qregex.denote(qregex.parse("a*", m2, AB), "a" * 7)


def test_compile_examples(m2):
    empty = qregex.compile(qregex.parse("_empty", m2, AB))
    assert all(empty(w) == m2.zero for w in words(AB, 4))
    e = qregex.compile(qregex.parse("[a]a + [b]b", m2, AB))
    assert (e("a"), e("b"), e("")) == (m2["a"], m2["b"], m2.zero)
    star = qregex.compile(qregex.parse("_empty*", m2, AB))
    assert [star(w) for w in words(AB, 2)] == [m2.one] + [m2.zero] * 6


def test_example21_expression(ex21):
    lat = ex21.lattice
    e = qregex.parse("[a00∨a01∨a10]σ + [a01∨a10]σσ* + [a01∨a10]_eps", lat, ("σ",))
    target = qlang.lvdfa_to_step(qfa.determinize(ex21))
    assert qlang.equivalent(qregex.compile(e), target)


def test_example21_extraction(ex21):
    x = qregex.extract(ex21)
    assert isinstance(x.root, Union) and not isinstance(x.root.left, Union)
    assert qlang.equivalent(qregex.compile(x), qlang.lvdfa_to_step(qfa.determinize(ex21)))


def test_extract_of_zero_language(m2):
    A = qfa.LVFA(m2, ["q"], AB, {("q", "a", "q"): "a"}, {"q": "1"}, {})
    assert qregex.extract(A).root == Empty()


def test_compile_matches_denote():
    rng = random.Random(2)
    for i in range(50):
        lat = [oml.mo(2), oml.boolean(2)][i % 2]
        e = random_expression(rng, lat, depth=4)
        S = qregex.compile(e)
        for w in words(AB, 5):
            assert S(w) == qregex.denote(e, w), (str(e), w)


def test_extract_round_trip():
    rng = random.Random(3)
    for _ in range(30):
        A = random_lvfa(rng, oml.mo(2), max_states=3)
        target = qlang.lvdfa_to_step(qfa.determinize(A))
        assert qlang.equivalent(qregex.compile(qregex.extract(A)), target)
        again = qregex.parse(str(qregex.extract(A)), A.lattice, AB)
        assert qlang.equivalent(qregex.compile(again), target)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from(["mo:2", "boolean:2", "mo:3"]))
def test_compile_denote_property(seed_rng, spec):
    lat = oml.build_standard(spec)
    e = random_expression(seed_rng, lat, depth=3)
    assert qregex.parse(str(e), lat, AB).root == e.root
    S = qregex.compile(e)
    for w in words(AB, 4):
        assert S(w) == qregex.denote(e, w)

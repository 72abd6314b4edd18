import pytest
from hypothesis import given

import gen
from siminf.syntax import (
    And, ArityError, Atom, Const, Eq, Exists, Forall, Implies, Not, Or, ParseError, Signature,
    Symbol, UnknownSymbolError, Var, free_variables, is_sentence, parse_formula, parse_signature,
    symbols_of,
)

SIG = parse_signature("C/1 E/1 H/2 s/0 l/0 a/0 b/0")


def p(text):
    return parse_formula(text, SIG)


def test_universal_over_disjunction():
    assert p("forall x. (C(x) | E(x))") == Forall("x", Or(Atom("C", (Var("x"),)), Atom("E", (Var("x"),))))


def test_equality_of_constants():
    assert p("s = s") == Eq(Const("s"), Const("s"))


def test_arity_mismatch():
    with pytest.raises(ArityError):
        p("C(x, y)")


def test_unknown_symbol():
    with pytest.raises(UnknownSymbolError):
        p("F(x)")


@pytest.mark.parametrize("text", ["C(x", "forall . C(x)", "C(x) &", "C(x) C(y)", "", "->"])
def test_syntax_errors_carry_position(text):
    with pytest.raises(ParseError) as info:
        p(text)
    assert info.value.position >= 0


def test_precedence_and_associativity():
    cx, ex = Atom("C", (Var("x"),)), Atom("E", (Var("x"),))
    assert p("~C(x) & E(x)") == And(Not(cx), ex)
    assert p("C(x) & E(x) | C(x)") == Or(And(cx, ex), cx)
    assert p("C(x) -> E(x) -> C(x)") == Implies(cx, Implies(ex, cx))
    # quantifier scope extends as far right as possible
    assert p("forall x. C(x) -> E(x)") == Forall("x", Implies(cx, ex))


def test_free_variables():
    assert free_variables(p("forall x. (C(x) -> exists y. H(x, y))")) == frozenset()
    assert free_variables(p("H(x, y)")) == {"x", "y"}
    assert free_variables(p("exists y. H(x, y)")) == {"x"}
    assert is_sentence(p("C(s)"))
    assert not is_sentence(p("C(x)"))


def test_symbols_of():
    assert symbols_of(p("E(b)")) == Signature([Symbol("E", 1), Symbol("b", 0)])
    assert symbols_of(p("x = y")) == Signature()
    assert symbols_of(p("forall x. (C(x) | E(x))")) == Signature([Symbol("C", 1), Symbol("E", 1)])


def test_signature_rules():
    with pytest.raises(ValueError):
        Signature([Symbol("C", 1), Symbol("C", 2)])
    with pytest.raises(ValueError):
        Symbol("", 1)
    assert Symbol("b", 0).is_constant and Symbol("H", 2).is_relation
    assert parse_signature("E/1 C/1") == parse_signature("C/1 E/1")
    assert Signature([Symbol("C", 1)]) <= SIG


def test_declared_lowercase_is_constant():
    assert p("E(a)") == Atom("E", (Const("a"),))
    assert p("E(q)") == Atom("E", (Var("q"),))


@given(gen.signatures.flatmap(lambda sig: gen.formulas_over(sig, 5).map(lambda f: (sig, f))))
def test_print_parse_round_trip(pair):
    sig, f = pair
    assert parse_formula(str(f), sig) == f


@given(gen.signatures.flatmap(lambda sig: gen.formulas_over(sig, 4).map(lambda f: (sig, f))))
def test_symbols_within_parsing_signature(pair):
    sig, f = pair
    assert symbols_of(f) <= sig
    assert is_sentence(f)

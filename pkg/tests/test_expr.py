from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feq import expr as E
from feq.errors import (
    EvaluationIncomplete,
    NotInlined,
    ParseError,
    UnboundVariable,
    UnknownIdentifier,
    UnsupportedFragment,
)
from feq.parser import format_problem, parse_equation, parse_problem, parse_term
from strategies import environments, expressions, small_rationals

x, y = E.Var("x"), E.Var("y")


def test_parse_cauchy_like_equation():
    eq = parse_equation("forall x y. f(x+y) = x*f(y) + y*f(x)")
    assert eq.variables == ("x", "y")
    assert eq.lhs == E.f(x + y)
    assert eq.rhs == x * E.f(y) + y * E.f(x)


def test_parse_reflexive_equation():
    eq = parse_equation("forall x. f(x) = f(x)")
    assert eq.lhs == eq.rhs == E.f(x)


def test_division_is_rejected():
    with pytest.raises(UnsupportedFragment):
        parse_equation("forall x. f(x) = x/y")
    with pytest.raises(UnsupportedFragment):
        parse_equation("forall x y. f(x) = x/y")


def test_unbound_and_unknown_names():
    with pytest.raises(UnboundVariable):
        parse_equation("forall x. f(x) = y")
    with pytest.raises(UnknownIdentifier):
        parse_equation("forall x. g(x) = x")


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_problem("problem P\nassert forall x . f(x = x\n")
    assert info.value.line == 2
    assert info.value.column is not None


def test_rational_literal_is_a_constant():
    e = parse_term("1/2*x", ("x",))
    assert E.evaluate(e, {"x": 4}) == 2


def test_unicode_operators():
    eq = parse_equation("∀ x y . f(x − y) = f(x) · f(y)")
    assert eq.lhs == E.f(x - y)


def test_equation_must_be_closed():
    with pytest.raises(ValueError):
        E.Equation(E.f(x), y, ("x",))


def test_node_invariants():
    with pytest.raises(ValueError):
        E.Pow(x, 0)
    with pytest.raises(ValueError):
        E.Sum((x,))
    with pytest.raises(ValueError):
        E.Prod((x,))


def test_const_is_canonical():
    c = E.Const(Fraction(6, -4))
    assert c.value.numerator == -3 and c.value.denominator == 2


def test_substitute_examples():
    assert E.substitute(E.f(x + y), {"x": E.Const(0)}) == E.f(E.Const(0) + y)
    assert E.substitute(x * E.f(y), {"x": x, "y": x}) == x * E.f(x)
    sq = E.substitute((x - y) ** 2, {"x": E.Const(1), "y": E.Const(-1)})
    assert E.format_expr(sq) == "(1 - -1)^2"
    assert E.evaluate(sq, {}) == 4


def test_substitute_is_simultaneous():
    swapped = E.substitute(x - y, {"x": y, "y": x})
    assert swapped == y - x


def test_evaluate_examples():
    c, d = E.Coef("c"), E.Coef("d")
    assert E.evaluate(2 * c + d, {"c": 1, "d": 0}) == 2
    assert E.evaluate((x - y) ** 2, {"x": 3, "y": 1}) == 4
    with pytest.raises(EvaluationIncomplete):
        E.evaluate(E.Coef("b") ** 2, {"a": 1})
    with pytest.raises(NotInlined):
        E.evaluate(E.f(x), {"x": 1})


def test_map_apps_inlines_innermost_first():
    e = E.f(E.f(x))
    out = E.map_apps(e, lambda u: u + 1)
    assert E.evaluate(out, {"x": 0}) == 2
    assert E.count_apps(out) == 0


@settings(max_examples=1000, deadline=None)
@given(expressions(), expressions(), environments())
def test_evaluate_is_a_homomorphism(e1, e2, env):
    v1, v2 = E.evaluate(e1, env), E.evaluate(e2, env)
    assert E.evaluate(E.Sum((e1, e2)), env) == v1 + v2
    assert E.evaluate(E.Prod((e1, e2)), env) == v1 * v2
    assert E.evaluate(E.Neg(e1), env) == -v1
    assert E.evaluate(E.Pow(e1, 2), env) == v1 * v1


@settings(max_examples=300, deadline=None)
@given(expressions(), small_rationals, small_rationals)
def test_substitution_composition(e, u, v):
    # domains {x} and {y} are disjoint from the constant ranges
    sigma = {"x": E.Const(u)}
    tau = {"y": E.Const(v)}
    composed = {"x": E.Const(u), "y": E.Const(v)}
    assert E.substitute(E.substitute(e, sigma), tau) == E.substitute(e, composed)


@settings(max_examples=300, deadline=None)
@given(expressions())
def test_format_then_parse_is_identity(e):
    assert parse_term(E.format_expr(e), ("x", "y"), ("a", "b")) == e


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(1, 10**6), st.integers(-50, 50), st.integers(1, 50))
def test_rationals_stay_in_lowest_terms(p, q, r, s):
    e = E.Sum((E.Const(Fraction(p, q)), E.Prod((E.Const(Fraction(r, s)), x))))
    value = E.evaluate(e, {"x": Fraction(q, 3)})
    assert value.denominator > 0
    assert gcd(abs(value.numerator), value.denominator) == 1
    assert parse_term(E.format_const(value)) == E.Const(value)


def test_corpus_round_trips(corpus):
    for p in corpus.values():
        assert parse_problem(format_problem(p)) == p

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from feq import expr as E
from feq.errors import NotInlined
from feq.parser import parse_term
from feq.poly import (
    Polynomial,
    coefficients_wrt,
    poly_add,
    poly_mul,
    poly_neg,
    poly_pow,
    reassemble,
    to_polynomial,
)
from strategies import environments, expressions, polynomials

ZERO = Polynomial()


def P(text, variables=("x", "y", "z"), coefficients=("a", "b", "c")):
    return to_polynomial(parse_term(text, variables, coefficients))


def random_env(names, rng):
    return {n: Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for n in names}


def test_binomial_square():
    assert poly_pow(P("x - y"), 2) == P("x^2 - 2*x*y + y^2")


def test_additive_inverse():
    p = P("a*x^2 + 3*b*y - 7")
    assert poly_add(p, poly_neg(p)) == ZERO
    assert (p - p).terms == {}


def test_product_of_linear_templates():
    prod = poly_mul(P("a*x + b"), P("a*y + b"))
    assert prod == P("a^2*x*y + a*b*x + a*b*y + b^2")
    rng = random.Random(7)
    lhs = parse_term("(a*x + b)*(a*y + b)", ("x", "y"), ("a", "b"))
    for _ in range(20):
        env = random_env("abxy", rng)
        assert prod.evaluate(env) == E.evaluate(lhs, env)


def test_to_polynomial_examples():
    # right-hand side of Eq1 under f(t) = a*t + b
    assert P("x*(a*y + b) + y*(a*x + b)") == P("2*a*x*y + b*x + b*y")
    assert P("(1 - 1)*x") == ZERO
    with pytest.raises(NotInlined):
        to_polynomial(E.f(E.Var("x")))


def _coeffs(p, variables):
    return {str(m): q for m, q in coefficients_wrt(p, variables).items()}


def test_coefficients_wrt_eq1_linear():
    p = P("a*x + a*y + b - 2*a*x*y - b*x - b*y")
    got = _coeffs(p, {"x", "y"})
    assert got == {"x*y": P("-2*a"), "x": P("a - b"), "y": P("a - b"), "1": P("b")}


def test_coefficients_wrt_other_examples():
    assert _coeffs(P("a*x^2 - a^2*x^2"), {"x"}) == {"x^2": P("a - a^2")}
    assert coefficients_wrt(ZERO, {"x", "y"}) == {}


def test_degree_and_univariate_coefficients():
    p = P("3*b^2 - b + 2")
    assert p.degree("b") == 2 and ZERO.degree() == -1
    assert p.univariate_coefficients("b") == [2, -1, 3]


def test_primitive_part():
    p = P("-4*a + 6*b")
    q = p.primitive()
    assert q == P("2*a - 3*b")


@settings(max_examples=1000, deadline=None)
@given(polynomials(), polynomials(), polynomials())
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + ZERO == p
    assert p * Polynomial.const(1) == p
    assert (p - p).terms == {}


@settings(max_examples=1000, deadline=None)
@given(expressions(), environments())
def test_to_polynomial_agrees_with_evaluate(e, env):
    assert to_polynomial(e).evaluate(env) == E.evaluate(e, env)


@settings(max_examples=300, deadline=None)
@given(polynomials(names=("x", "y", "a", "b")))
def test_coefficients_reassemble(p):
    parts = coefficients_wrt(p, {"x", "y"})
    assert reassemble(parts) == p
    for coeff in parts.values():
        assert not coeff.symbols() & {"x", "y"}


@settings(max_examples=300, deadline=None)
@given(polynomials())
def test_to_expr_round_trip(p):
    assert to_polynomial(p.to_expr({"x", "y"})) == p

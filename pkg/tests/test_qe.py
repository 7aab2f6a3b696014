import random
from fractions import Fraction
from itertools import product

from hypothesis import given, settings
from hypothesis import strategies as st

from feq.parser import parse_term
from feq.poly import Polynomial, to_polynomial
from feq.qe import CoefficientConstraint, eliminate, normalize_constraint
from feq.template import Kind, Template, inline

VARS = {"x", "y"}


def P(text):
    return to_polynomial(parse_term(text, ("x", "y"), ("a", "b")))


def test_eq1_linear(corpus):
    c = eliminate(inline(corpus["Eq1"], Template.of(Kind.LINEAR)), VARS)
    assert set(c.equations) == {P("a"), P("a - b"), P("b")}


def test_u3_linear(corpus):
    c = eliminate(inline(corpus["U3"], Template.of(Kind.LINEAR)), VARS)
    assert c.equations == (P("a - 1"),)


def test_u91_linear(corpus):
    c = eliminate(inline(corpus["U91"], Template.of(Kind.LINEAR)), VARS)
    expected = {P("a - a^2"), P("a - 1"), P("2*a*b - 2*b"), P("b - b^2")}
    assert set(c.equations) == {q.primitive() for q in expected}


def test_normalize_examples():
    assert normalize_constraint(CoefficientConstraint((P("2*a"), P("a"), Polynomial()))).equations == (P("a"),)
    kept = normalize_constraint(CoefficientConstraint((P("a - a^2"), P("a - 1"))))
    assert set(kept.equations) == {P("a^2 - a"), P("a - 1")}
    assert normalize_constraint(CoefficientConstraint(())).equations == ()


def test_leading_coefficient_positive():
    (q,) = normalize_constraint(CoefficientConstraint((P("1 - a"),))).equations
    assert q == P("a - 1")


def test_no_variables_survive(corpus):
    for name, p in corpus.items():
        if name == "U2":
            continue
        for kind in Kind:
            t = Template.of(kind, avoid=p.variables())
            c = eliminate(inline(p, t), p.variables())
            assert not c.symbols() & p.variables()


small = st.integers(-3, 3).map(Fraction)
x_monomials = [(), (("x", 1),), (("y", 1),), (("x", 2),), (("x", 1), ("y", 1)), (("y", 2),)]
c_monomials = [(), (("a", 1),), (("b", 1),), (("a", 2),), (("a", 1), ("b", 1)), (("b", 2),)]


def _mono(pairs):
    out = Polynomial.const(1)
    for name, e in pairs:
        out = out * Polynomial.symbol(name) ** e
    return out


@st.composite
def identities(draw):
    """A degree-2 polynomial q over x, y with coefficients quadratic in a, b, and a point sigma."""
    terms = draw(st.lists(st.tuples(st.sampled_from(x_monomials), st.sampled_from(c_monomials), small), min_size=1, max_size=6))
    q = Polynomial()
    for xm, cm, k in terms:
        q = q + _mono(xm) * _mono(cm) * k
    sigma = {"a": draw(small), "b": draw(small)}
    return q, sigma


@settings(max_examples=200, deadline=None)
@given(identities())
def test_elimination_against_random_points(case):
    q, sigma = case
    # p vanishes identically in x, y once the coefficients take the values sigma
    p = q - q.partial(sigma)
    c = eliminate([p], VARS)
    assert c.satisfied_by(sigma)
    rng = random.Random(0)
    points = [{"x": Fraction(rng.randint(-50, 50), rng.randint(1, 7)), "y": Fraction(rng.randint(-50, 50), rng.randint(1, 7))} for _ in range(100)]
    for a, b in product(range(-3, 4), repeat=2):
        other = {"a": Fraction(a), "b": Fraction(b)}
        residual = p.partial(other)
        values = [residual.evaluate(pt) for pt in points]
        if c.satisfied_by(other):
            assert all(v == 0 for v in values)
        else:
            assert any(v != 0 for v in values)
    assert normalize_constraint(c) == c

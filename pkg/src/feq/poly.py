"""Exact sparse multivariate polynomials over the rationals."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

from . import expr as E
from .errors import EvaluationIncomplete, NotInlined


class Monomial(tuple):
    """Sorted ``((symbol, exponent), ...)`` with positive exponents; ``()`` is 1."""

    __slots__ = ()

    def __new__(cls, items: Iterable = ()):
        if isinstance(items, Mapping):
            items = items.items()
        merged = {}
        for name, e in items:
            merged[name] = merged.get(name, 0) + e
        return super().__new__(cls, sorted((n, e) for n, e in merged.items() if e))

    @property
    def degree(self) -> int:
        return sum(e for _, e in self)

    def exponent(self, name: str) -> int:
        for n, e in self:
            if n == name:
                return e
        return 0

    def symbols(self) -> set:
        return {n for n, _ in self}

    def __mul__(self, other):
        return Monomial(tuple(self) + tuple(other))

    def split(self, names) -> tuple:
        """``(part over names, remaining part)``."""
        inside = Monomial((n, e) for n, e in self if n in names)
        outside = Monomial((n, e) for n, e in self if n not in names)
        return inside, outside

    def __str__(self):
        if not self:
            return "1"
        return "*".join(n if e == 1 else f"{n}^{e}" for n, e in self)

    def __repr__(self):
        return f"Monomial({str(self)})"


ONE = Monomial()


def grlex_key(symbols):
    """Sort key for graded lexicographic order over alphabetically ordered ``symbols``."""
    order = sorted(symbols)

    def key(m: Monomial):
        return (m.degree, tuple(m.exponent(s) for s in order))

    return key


class Polynomial:
    """Immutable mapping from Monomial to nonzero Fraction coefficient."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[Monomial(m)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def const(cls, value) -> "Polynomial":
        return cls({ONE: value})

    @classmethod
    def symbol(cls, name: str) -> "Polynomial":
        return cls({Monomial({name: 1}): 1})

    # -- ring operations
    def __add__(self, other):
        other = _lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = Polynomial.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, scalar):
        scalar = Fraction(scalar)
        return Polynomial({m: c / scalar for m, c in self.terms.items()})

    # -- comparison
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(ONE, Fraction(0))

    def symbols(self) -> set:
        return {n for m in self.terms for n in m.symbols()}

    def degree(self, name: str = None) -> int:
        """Total degree, or degree in ``name``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if name is None:
            return max(m.degree for m in self.terms)
        return max(m.exponent(name) for m in self.terms)

    def sorted_terms(self) -> list:
        key = grlex_key(self.symbols())
        return sorted(self.terms.items(), key=lambda mc: key(mc[0]), reverse=True)

    def leading_term(self):
        return self.sorted_terms()[0]

    def content(self) -> Fraction:
        """Positive rational g with self/g having coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        coeffs = list(self.terms.values())
        num = 0
        den = 1
        for c in coeffs:
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Polynomial":
        """Divide by content and make the grlex-leading coefficient positive."""
        if not self.terms:
            return self
        p = self / self.content()
        if p.leading_term()[1] < 0:
            p = -p
        return p

    # -- evaluation
    def evaluate(self, env: Mapping) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for n, e in m:
                if n not in env:
                    raise EvaluationIncomplete(n)
                v *= Fraction(env[n]) ** e
            total += v
        return total

    def partial(self, env: Mapping) -> "Polynomial":
        """Substitute values for the symbols in ``env``; others stay symbolic."""
        out = {}
        for m, c in self.terms.items():
            v = c
            rest = []
            for n, e in m:
                if n in env:
                    v *= Fraction(env[n]) ** e
                else:
                    rest.append((n, e))
            key = Monomial(rest)
            out[key] = out.get(key, 0) + v
        return Polynomial(out)

    def univariate_coefficients(self, name: str) -> list:
        """Rational coefficients ``[c0, c1, ...]`` of a polynomial in ``name`` only."""
        extra = self.symbols() - {name}
        if extra:
            raise ValueError(f"not univariate in {name}: also mentions {sorted(extra)}")
        coeffs = [Fraction(0)] * (max(self.degree(name), 0) + 1)
        for m, c in self.terms.items():
            coeffs[m.exponent(name)] += c
        return coeffs

    # -- conversion
    def to_expr(self, variables=frozenset()) -> E.Expr:
        """Expression with names in ``variables`` as Var nodes, others as Coef.

        Terms go by descending degree in ``variables``, then grlex, so a
        template instance prints as ``x + b`` rather than ``b + x``.
        """

        def sym(n):
            return E.Var(n) if n in variables else E.Coef(n)

        def var_degree(item):
            return -sum(e for n, e in item[0] if n in variables)

        summands = []
        for m, c in sorted(self.sorted_terms(), key=var_degree):
            factors = [sym(n) if e == 1 else E.Pow(sym(n), e) for n, e in m]
            mag = abs(c)
            if not factors:
                term = E.Const(mag)
            elif mag == 1:
                term = factors[0] if len(factors) == 1 else E.Prod(tuple(factors))
            else:
                term = E.Prod((E.Const(mag), *factors))
            if c < 0 and not summands and factors:
                # leading minus on the first factor prints as "-2*a*x" rather than "-(2*a*x)"
                if isinstance(term, E.Prod):
                    term = E.Prod((E.negate(term.args[0]), *term.args[1:]))
                else:
                    term = E.negate(term)
            elif c < 0:
                term = E.negate(term)
            summands.append(term)
        if not summands:
            return E.Const(0)
        return summands[0] if len(summands) == 1 else E.Sum(tuple(summands))

    def __str__(self):
        return E.format_expr(self.to_expr())

    def __repr__(self):
        return f"Polynomial({self})"


def _lift(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return Polynomial.const(value)
    raise TypeError(f"cannot treat {value!r} as a polynomial")


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def poly_neg(p: Polynomial) -> Polynomial:
    return -p


def poly_pow(p: Polynomial, n: int) -> Polynomial:
    if n < 1:
        raise ValueError("exponent must be positive")
    return p ** n


def to_polynomial(e: E.Expr) -> Polynomial:
    """Normal form of an f-free expression."""
    if isinstance(e, E.Const):
        return Polynomial.const(e.value)
    if isinstance(e, (E.Var, E.Coef)):
        return Polynomial.symbol(e.name)
    if isinstance(e, E.Sum):
        out = Polynomial()
        for a in e.args:
            out = out + to_polynomial(a)
        return out
    if isinstance(e, E.Prod):
        out = Polynomial.const(1)
        for a in e.args:
            out = out * to_polynomial(a)
        return out
    if isinstance(e, E.Neg):
        return -to_polynomial(e.arg)
    if isinstance(e, E.Pow):
        return to_polynomial(e.base) ** e.exp
    if isinstance(e, E.App):
        raise NotInlined(f"application {E.format_expr(e)} must be inlined first")
    raise TypeError(f"not an expression: {e!r}")


def coefficients_wrt(p: Polynomial, variables) -> dict:
    """Coefficient polynomial of each monomial in ``variables``, grlex-descending.

    Over an infinite field a polynomial vanishes identically in ``variables``
    exactly when every one of these coefficients is the zero polynomial.
    """
    names = set(variables)
    groups = {}
    for m, c in p.terms.items():
        inside, outside = m.split(names)
        groups.setdefault(inside, {})
        groups[inside][outside] = groups[inside].get(outside, 0) + c
    key = grlex_key(names)
    out = {}
    for inside in sorted(groups, key=key, reverse=True):
        coeff = Polynomial(groups[inside])
        if coeff:
            out[inside] = coeff
    return out


def reassemble(coefficients: Mapping) -> Polynomial:
    """Inverse of coefficients_wrt: sum of coefficient times monomial."""
    out = Polynomial()
    for m, c in coefficients.items():
        out = out + c * Polynomial({m: 1})
    return out

"""Polynomial solution templates, inlining, and template-membership formulas."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product

from . import expr as E
from . import formula as F
from .parser import parse_term
from .poly import Polynomial, to_polynomial
from .problem import Problem, SolutionCandidate, require_equational


class Kind(enum.Enum):
    # value: (cli name, column label, default coefficient names, body in x)
    CONSTANT = ("constant", "c", ("c",), "c")
    MONOMIAL_LINEAR = ("mlinear", "ax", ("a",), "a*x")
    LINEAR = ("linear", "ax+b", ("a", "b"), "a*x + b")
    MONOMIAL_QUADRATIC = ("mquad", "ax^2", ("a",), "a*x^2")
    QUADRATIC = ("quad", "ax^2+bx+c", ("a", "b", "c"), "a*x^2 + b*x + c")

    @property
    def cli_name(self) -> str:
        return self.value[0]

    @property
    def label(self) -> str:
        return self.value[1]

    @classmethod
    def from_name(cls, name: str) -> "Kind":
        for k in cls:
            if name in (k.cli_name, k.name.lower(), k.name):
                return k
        raise ValueError(f"unknown template {name!r}")


# Smallest classes first: cheaper to verify, and the first hit is the most specific.
SEARCH_ORDER = (
    Kind.CONSTANT,
    Kind.MONOMIAL_LINEAR,
    Kind.MONOMIAL_QUADRATIC,
    Kind.LINEAR,
    Kind.QUADRATIC,
)

# Column order of the summary tables.
TABLE_ORDER = (Kind.CONSTANT, Kind.MONOMIAL_LINEAR, Kind.LINEAR, Kind.MONOMIAL_QUADRATIC, Kind.QUADRATIC)


class Variant(enum.Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class Template:
    kind: Kind
    coefficients: tuple

    @classmethod
    def of(cls, kind: Kind, avoid=()) -> "Template":
        """Template with the usual coefficient names, renamed if they clash with ``avoid``."""
        avoid = set(avoid)
        names = []
        for base in kind.value[2]:
            name, i = base, 0
            while name in avoid or name in names:
                i += 1
                name = f"{base}{i}"
            names.append(name)
        return cls(kind, tuple(names))

    def body(self, arg: E.Expr) -> E.Expr:
        """The template's right-hand side with ``x`` replaced by ``arg``."""
        default = self.kind.value[2]
        shape = parse_term(self.kind.value[3], ("x",), default)
        rename = {d: E.Coef(n) for d, n in zip(default, self.coefficients)}
        rename["x"] = arg
        return E.substitute(shape, rename)

    def body_polynomial(self) -> Polynomial:
        return to_polynomial(self.body(E.Var("x")))

    def __str__(self):
        return f"f(x) = {E.format_expr(self.body(E.Var('x')))}"


def inline_expr(e: E.Expr, t: Template) -> E.Expr:
    return E.map_apps(e, t.body)


def inline(p: Problem, t: Template) -> list:
    """Each equation's ``lhs - rhs`` as a polynomial after replacing f by the template."""
    require_equational(p)
    out = []
    for eq in p.equations:
        lhs = to_polynomial(inline_expr(eq.lhs, t))
        rhs = to_polynomial(inline_expr(eq.rhs, t))
        out.append(lhs - rhs)
    return out


# Second-variant identities: the template class described through values of f alone.
_SECOND_VARIANT = {
    Kind.CONSTANT: ("f(x)", "f(0)"),
    Kind.MONOMIAL_LINEAR: ("f(x)", "f(1)*x"),
    Kind.LINEAR: ("f(x)", "(f(1) - f(0))*x + f(0)"),
    Kind.MONOMIAL_QUADRATIC: ("f(x)", "f(1)*x^2"),
    Kind.QUADRATIC: ("2*f(x)", "((f(1) + f(-1)) - 2*f(0))*x^2 + (f(1) - f(-1))*x + 2*f(0)"),
}


def membership_identity(kind: Kind, var: str = "x") -> tuple:
    """``(lhs, rhs)`` of the f-only identity characterizing the template class."""
    lhs, rhs = _SECOND_VARIANT[kind]
    sub = {"x": E.Var(var)}
    return (
        E.substitute(parse_term(lhs, ("x",)), sub),
        E.substitute(parse_term(rhs, ("x",)), sub),
    )


def membership_formula(t, variant: Variant) -> F.Formula:
    """Closed formula stating that f belongs to the template class."""
    if isinstance(t, Kind):
        t = Template.of(t, avoid={"x"})
    if variant is Variant.SECOND:
        lhs, rhs = membership_identity(t.kind)
        return F.Forall(("x",), F.Eq(lhs, rhs))
    body = E.substitute(t.body(E.Var("x")), {c: E.Var(c) for c in t.coefficients})
    return F.Exists(t.coefficients, F.Forall(("x",), F.Eq(E.f(E.Var("x")), body)))


@dataclass(frozen=True)
class VerificationObligation:
    """Problem assertions plus the negated membership formula.

    Unsatisfiable exactly when every solution lies in the template class.
    """

    problem: str
    kind: Kind
    variant: Variant
    assertions: tuple

    @property
    def formula(self) -> F.Formula:
        return F.conj(self.assertions)

    @property
    def negated_membership(self) -> F.Formula:
        return self.assertions[-1]


def verification_obligation(p: Problem, t, variant: Variant) -> VerificationObligation:
    kind = t.kind if isinstance(t, Template) else t
    member = membership_formula(t, variant)
    assertions = (*p.formulas(), F.negate(member))
    return VerificationObligation(p.name, kind, variant, assertions)


def fits(kind: Kind, function: Polynomial, var: str = "x") -> bool:
    """Is the concrete polynomial function ``function(var)`` a member of the class?"""
    if function.symbols() - {var}:
        raise ValueError("function must be a polynomial in one variable with numeric coefficients")
    degrees = {m.exponent(var) for m in function.terms}
    allowed = {
        Kind.CONSTANT: {0},
        Kind.MONOMIAL_LINEAR: {1},
        Kind.LINEAR: {0, 1},
        Kind.MONOMIAL_QUADRATIC: {2},
        Kind.QUADRATIC: {0, 1, 2},
    }[kind]
    return degrees <= allowed


def instantiate(t: Template, assignment) -> SolutionCandidate:
    """The solution family a solved-form disjunct denotes; free coefficients become parameters."""
    values = assignment.values()
    body = t.body_polynomial().partial(values)
    return SolutionCandidate(body.to_expr(frozenset({"x"})), tuple(assignment.free))


def function_instances(candidate: SolutionCandidate, samples=(0, 1, -1, 2)) -> list:
    """Concrete members of a candidate family, parameters drawn from ``samples``."""
    base = to_polynomial(candidate.body)
    out = []
    for combo in product(samples, repeat=len(candidate.params)):
        env = dict(zip(candidate.params, combo))
        if all(F.holds(c, env) for c in candidate.constraints):
            out.append(base.partial(env))
    return out

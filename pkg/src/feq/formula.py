"""First-order formulas over expressions: atoms, connectives and real quantifiers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import expr as E

COMPARISONS = ("<=", ">=", "<", ">")
_FLIP = {"<": ">=", ">=": "<", ">": "<=", "<=": ">"}


class Formula:
    __slots__ = ()

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Eq(Formula):
    lhs: E.Expr
    rhs: E.Expr


@dataclass(frozen=True)
class Cmp(Formula):
    op: str
    lhs: E.Expr
    rhs: E.Expr

    def __post_init__(self):
        if self.op not in COMPARISONS:
            raise ValueError(f"unknown comparison {self.op!r}")


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Or(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Forall(Formula):
    variables: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))


@dataclass(frozen=True)
class Exists(Formula):
    variables: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))


@dataclass(frozen=True)
class Bool(Formula):
    value: bool


TRUE = Bool(True)
FALSE = Bool(False)


def Ne(lhs, rhs) -> Not:
    return Not(Eq(lhs, rhs))


def forall(variables, body: Formula) -> Formula:
    return Forall(tuple(variables), body) if variables else body


def exists(variables, body: Formula) -> Formula:
    return Exists(tuple(variables), body) if variables else body


def conj(parts) -> Formula:
    parts = tuple(parts)
    if len(parts) == 1:
        return parts[0]
    return And(parts) if parts else TRUE


def disj(parts) -> Formula:
    parts = tuple(parts)
    if len(parts) == 1:
        return parts[0]
    return Or(parts) if parts else FALSE


def equation_formula(eq: E.Equation) -> Formula:
    return forall(eq.variables, Eq(eq.lhs, eq.rhs))


def negate(phi: Formula) -> Formula:
    """Negation pushed through connectives and quantifiers.

    Equalities keep an explicit ``Not`` (a disequality); strict and non-strict
    comparisons flip, which is sound over a total order.
    """
    if isinstance(phi, Not):
        return phi.arg
    if isinstance(phi, Eq):
        return Not(phi)
    if isinstance(phi, Cmp):
        return Cmp(_FLIP[phi.op], phi.lhs, phi.rhs)
    if isinstance(phi, And):
        return disj(negate(a) for a in phi.args)
    if isinstance(phi, Or):
        return conj(negate(a) for a in phi.args)
    if isinstance(phi, Implies):
        return conj((phi.lhs, negate(phi.rhs)))
    if isinstance(phi, Forall):
        return Exists(phi.variables, negate(phi.body))
    if isinstance(phi, Exists):
        return Forall(phi.variables, negate(phi.body))
    if isinstance(phi, Bool):
        return Bool(not phi.value)
    raise TypeError(f"not a formula: {phi!r}")


def map_terms(phi: Formula, fn: Callable[[E.Expr], E.Expr]) -> Formula:
    if isinstance(phi, Eq):
        return Eq(fn(phi.lhs), fn(phi.rhs))
    if isinstance(phi, Cmp):
        return Cmp(phi.op, fn(phi.lhs), fn(phi.rhs))
    if isinstance(phi, Not):
        return Not(map_terms(phi.arg, fn))
    if isinstance(phi, And):
        return And(tuple(map_terms(a, fn) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(map_terms(a, fn) for a in phi.args))
    if isinstance(phi, Implies):
        return Implies(map_terms(phi.lhs, fn), map_terms(phi.rhs, fn))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.variables, map_terms(phi.body, fn))
    return phi


def terms(phi: Formula):
    if isinstance(phi, (Eq, Cmp)):
        yield phi.lhs
        yield phi.rhs
    elif isinstance(phi, (Not,)):
        yield from terms(phi.arg)
    elif isinstance(phi, (And, Or)):
        for a in phi.args:
            yield from terms(a)
    elif isinstance(phi, Implies):
        yield from terms(phi.lhs)
        yield from terms(phi.rhs)
    elif isinstance(phi, (Forall, Exists)):
        yield from terms(phi.body)


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Forall, Exists)):
        return False
    if isinstance(phi, Not):
        return is_quantifier_free(phi.arg)
    if isinstance(phi, (And, Or)):
        return all(is_quantifier_free(a) for a in phi.args)
    if isinstance(phi, Implies):
        return is_quantifier_free(phi.lhs) and is_quantifier_free(phi.rhs)
    return True


_COMPARE = {
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
}


def compare(op: str, a, b) -> bool:
    return _COMPARE[op](a, b)


def holds(phi: Formula, env) -> bool:
    """Truth value of a quantifier-free, f-free formula under ``env``."""
    if isinstance(phi, Eq):
        return E.evaluate(phi.lhs, env) == E.evaluate(phi.rhs, env)
    if isinstance(phi, Cmp):
        return compare(phi.op, E.evaluate(phi.lhs, env), E.evaluate(phi.rhs, env))
    if isinstance(phi, Not):
        return not holds(phi.arg, env)
    if isinstance(phi, And):
        return all(holds(a, env) for a in phi.args)
    if isinstance(phi, Or):
        return any(holds(a, env) for a in phi.args)
    if isinstance(phi, Implies):
        return not holds(phi.lhs, env) or holds(phi.rhs, env)
    if isinstance(phi, Bool):
        return phi.value
    raise ValueError(f"cannot evaluate quantified formula {format_formula(phi)}")


def _wrap(phi: Formula) -> str:
    s = format_formula(phi)
    return f"({s})" if isinstance(phi, (And, Or, Implies, Forall, Exists)) else s


def format_formula(phi: Formula) -> str:
    if isinstance(phi, Eq):
        return f"{E.format_expr(phi.lhs)} = {E.format_expr(phi.rhs)}"
    if isinstance(phi, Cmp):
        return f"{E.format_expr(phi.lhs)} {phi.op} {E.format_expr(phi.rhs)}"
    if isinstance(phi, Not):
        if isinstance(phi.arg, Eq):
            return f"{E.format_expr(phi.arg.lhs)} != {E.format_expr(phi.arg.rhs)}"
        return f"not {_wrap(phi.arg)}"
    if isinstance(phi, And):
        return " and ".join(_wrap(a) for a in phi.args) if phi.args else "true"
    if isinstance(phi, Or):
        return " or ".join(_wrap(a) for a in phi.args) if phi.args else "false"
    if isinstance(phi, Implies):
        return f"{_wrap(phi.lhs)} => {_wrap(phi.rhs)}"
    if isinstance(phi, Forall):
        return f"forall {' '.join(phi.variables)} . {format_formula(phi.body)}"
    if isinstance(phi, Exists):
        return f"exists {' '.join(phi.variables)} . {format_formula(phi.body)}"
    if isinstance(phi, Bool):
        return "true" if phi.value else "false"
    raise TypeError(f"not a formula: {phi!r}")

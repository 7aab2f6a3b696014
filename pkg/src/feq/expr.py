"""Expression trees over the rationals with a single unknown unary function ``f``.

Nodes are immutable dataclasses.  Subtraction has no node of its own: ``a - b``
is ``Sum((a, Neg(b)))``.  Applications of the unknown function are ``App``
nodes; everything else is ordinary polynomial arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Union

from .errors import EvaluationIncomplete, NotInlined

Number = Union[int, Fraction]


class Expr:
    """Base class for expression nodes.  Supports ``+ - * **`` for building terms."""

    __slots__ = ()

    def __add__(self, other):
        return Sum((self, as_expr(other)))

    def __radd__(self, other):
        return Sum((as_expr(other), self))

    def __sub__(self, other):
        return Sum((self, negate(as_expr(other))))

    def __rsub__(self, other):
        return Sum((as_expr(other), negate(self)))

    def __mul__(self, other):
        return Prod((self, as_expr(other)))

    def __rmul__(self, other):
        return Prod((as_expr(other), self))

    def __neg__(self):
        return negate(self)

    def __pow__(self, n):
        return Pow(self, n)

    def __str__(self):
        return format_expr(self)


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    def __repr__(self):
        return f"Const({self.value})"


@dataclass(frozen=True, repr=False)
class Var(Expr):
    """A universally quantified problem variable."""

    name: str

    def __repr__(self):
        return f"Var({self.name})"


@dataclass(frozen=True, repr=False)
class Coef(Expr):
    """A symbolic constant: template coefficient or solution parameter."""

    name: str

    def __repr__(self):
        return f"Coef({self.name})"


@dataclass(frozen=True, repr=False)
class Sum(Expr):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) < 2:
            raise ValueError("a sum needs at least two summands")

    def __repr__(self):
        return f"Sum({', '.join(map(repr, self.args))})"


@dataclass(frozen=True, repr=False)
class Prod(Expr):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) < 2:
            raise ValueError("a product needs at least two factors")

    def __repr__(self):
        return f"Prod({', '.join(map(repr, self.args))})"


@dataclass(frozen=True, repr=False)
class Neg(Expr):
    arg: Expr

    def __repr__(self):
        return f"Neg({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Pow(Expr):
    base: Expr
    exp: int

    def __post_init__(self):
        if not isinstance(self.exp, int) or isinstance(self.exp, bool) or self.exp < 1:
            raise ValueError(f"exponent must be a positive integer, got {self.exp!r}")

    def __repr__(self):
        return f"Pow({self.base!r}, {self.exp})"


@dataclass(frozen=True, repr=False)
class App(Expr):
    """Application ``f(arg)`` of the unknown function."""

    arg: Expr

    def __repr__(self):
        return f"App({self.arg!r})"


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Const(value)
    raise TypeError(f"cannot convert {value!r} to an expression")


def negate(e: Expr) -> Expr:
    # Negative literals are constants, never Neg(Const).
    if isinstance(e, Const):
        return Const(-e.value)
    return Neg(e)


def f(arg) -> App:
    return App(as_expr(arg))


@dataclass(frozen=True)
class Equation:
    lhs: Expr
    rhs: Expr
    variables: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        free = (variables(self.lhs) | variables(self.rhs)) - set(self.variables)
        if free:
            raise ValueError(f"unquantified variables {sorted(free)} in equation")

    def __str__(self):
        body = f"{format_expr(self.lhs)} = {format_expr(self.rhs)}"
        if self.variables:
            return f"forall {' '.join(self.variables)} . {body}"
        return body


# -- traversal ----------------------------------------------------------------


def children(e: Expr) -> tuple:
    if isinstance(e, (Sum, Prod)):
        return e.args
    if isinstance(e, (Neg, App)):
        return (e.arg,)
    if isinstance(e, Pow):
        return (e.base,)
    return ()


def walk(e: Expr) -> Iterator[Expr]:
    yield e
    for c in children(e):
        yield from walk(c)


def variables(e: Expr) -> set:
    return {n.name for n in walk(e) if isinstance(n, Var)}


def coefficients(e: Expr) -> set:
    return {n.name for n in walk(e) if isinstance(n, Coef)}


def symbols(e: Expr) -> set:
    return {n.name for n in walk(e) if isinstance(n, (Var, Coef))}


def count_apps(e: Expr) -> int:
    return sum(1 for n in walk(e) if isinstance(n, App))


def rebuild(e: Expr, fn: Callable[[Expr], Expr]) -> Expr:
    """Return ``e`` with ``fn`` applied to each direct child."""
    if isinstance(e, Sum):
        return Sum(tuple(fn(a) for a in e.args))
    if isinstance(e, Prod):
        return Prod(tuple(fn(a) for a in e.args))
    if isinstance(e, Neg):
        return Neg(fn(e.arg))
    if isinstance(e, Pow):
        return Pow(fn(e.base), e.exp)
    if isinstance(e, App):
        return App(fn(e.arg))
    return e


def substitute(e: Expr, binding: Mapping[str, Expr]) -> Expr:
    """Simultaneously replace variables and symbolic constants named in ``binding``.

    There are no binders inside expressions, so simultaneous replacement is
    automatically capture-free.
    """
    if isinstance(e, (Var, Coef)):
        return as_expr(binding[e.name]) if e.name in binding else e
    if isinstance(e, Const):
        return e
    return rebuild(e, lambda c: substitute(c, binding))


def map_apps(e: Expr, fn: Callable[[Expr], Expr]) -> Expr:
    """Replace every ``f(u)`` by ``fn(u')`` where ``u'`` is already rewritten.

    Rewriting is innermost-first, so ``f(f(x))`` becomes ``fn(fn(x))``.
    """
    if isinstance(e, App):
        return fn(map_apps(e.arg, fn))
    if isinstance(e, (Const, Var, Coef)):
        return e
    return rebuild(e, lambda c: map_apps(c, fn))


def evaluate(e: Expr, env: Mapping[str, Number]) -> Fraction:
    """Exact value of an f-free expression.

    Raises EvaluationIncomplete when a symbol has no value in ``env``.
    """
    if isinstance(e, Const):
        return e.value
    if isinstance(e, (Var, Coef)):
        try:
            return Fraction(env[e.name])
        except KeyError:
            raise EvaluationIncomplete(e.name) from None
    if isinstance(e, Sum):
        return sum((evaluate(a, env) for a in e.args), Fraction(0))
    if isinstance(e, Prod):
        out = Fraction(1)
        for a in e.args:
            out *= evaluate(a, env)
        return out
    if isinstance(e, Neg):
        return -evaluate(e.arg, env)
    if isinstance(e, Pow):
        return evaluate(e.base, env) ** e.exp
    if isinstance(e, App):
        raise NotInlined(f"cannot evaluate application {format_expr(e)}")
    raise TypeError(f"not an expression: {e!r}")


def can_evaluate(e: Expr, assigned) -> bool:
    """True when every symbol of ``e`` has a value and ``e`` has no f-application."""
    for n in walk(e):
        if isinstance(n, App):
            return False
        if isinstance(n, (Var, Coef)) and n.name not in assigned:
            return False
    return True


# -- printing -------------------------------------------------------------------


def format_const(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _is_atomic(e: Expr) -> bool:
    if isinstance(e, Const):
        return e.value >= 0 and e.value.denominator == 1
    return isinstance(e, (Var, Coef, App))


def _paren(s: str) -> str:
    return f"({s})"


def format_expr(e: Expr) -> str:
    """Render in the problem-file syntax; ``parse_term(format_expr(e)) == e`` for parsed terms."""
    if isinstance(e, Const):
        return format_const(e.value)
    if isinstance(e, (Var, Coef)):
        return e.name
    if isinstance(e, App):
        return f"f({format_expr(e.arg)})"
    if isinstance(e, Sum):
        first, *rest = e.args
        out = format_expr(first)
        if isinstance(first, Sum):
            out = _paren(out)
        for a in rest:
            if isinstance(a, Neg):
                inner = format_expr(a.arg)
                out += " - " + (_paren(inner) if isinstance(a.arg, Sum) else inner)
            elif isinstance(a, Const) and a.value < 0:
                out += " - " + format_const(-a.value)
            else:
                inner = format_expr(a)
                out += " + " + (_paren(inner) if isinstance(a, Sum) else inner)
        return out
    if isinstance(e, Prod):
        parts = []
        for a in e.args:
            s = format_expr(a)
            parts.append(_paren(s) if isinstance(a, (Sum, Prod)) else s)
        return "*".join(parts)
    if isinstance(e, Neg):
        s = format_expr(e.arg)
        return "-" + (_paren(s) if isinstance(e.arg, (Sum, Prod)) else s)
    if isinstance(e, Pow):
        s = format_expr(e.base)
        return (s if _is_atomic(e.base) else _paren(s)) + f"^{e.exp}"
    raise TypeError(f"not an expression: {e!r}")

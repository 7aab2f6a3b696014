"""Turn a quantifier-free coefficient constraint into a solved form.

A solved form is a disjunction of assignments ``c = v`` to template
coefficients; coefficients the constraint leaves open are reported as free
parameters.  The procedure is deliberately syntactic and may give up
(NoSolvedForm) on constraints it has no rule for, e.g. ``c^3 = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import isqrt
from typing import Optional

from . import expr as E
from . import formula as F
from .errors import NoRationalRoot, NoSolvedForm
from .poly import Polynomial, to_polynomial


@dataclass(frozen=True)
class AssignmentAtom:
    coefficient: str
    value: Fraction

    def __str__(self):
        return f"{self.coefficient} = {E.format_const(self.value)}"


@dataclass(frozen=True, eq=False)
class Assignment:
    """One disjunct: atoms in the order they were derived, plus free coefficients."""

    atoms: tuple = ()
    free: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "free", tuple(self.free))
        if {a.coefficient for a in self.atoms} & set(self.free):
            raise ValueError("a coefficient cannot be both assigned and free")

    @classmethod
    def of(cls, values: dict, free=()) -> "Assignment":
        return cls(tuple(AssignmentAtom(c, Fraction(v)) for c, v in values.items()), tuple(free))

    def values(self) -> dict:
        return {a.coefficient: a.value for a in self.atoms}

    def _key(self):
        return frozenset(self.values().items()), frozenset(self.free)

    def __eq__(self, other):
        return isinstance(other, Assignment) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self):
        parts = [str(a) for a in self.atoms] + [f"{c} in R" for c in self.free]
        return ", ".join(parts) if parts else "true"

    def __repr__(self):
        return f"Assignment({self})"


@dataclass(frozen=True)
class SolvedForm:
    """Disjunction of assignments; no disjuncts means false."""

    disjuncts: tuple = ()

    def __post_init__(self):
        unique = tuple(dict.fromkeys(self.disjuncts))
        object.__setattr__(self, "disjuncts", unique)

    @property
    def is_bottom(self) -> bool:
        return not self.disjuncts

    def __len__(self):
        return len(self.disjuncts)

    def __iter__(self):
        return iter(self.disjuncts)

    def as_sets(self) -> set:
        """Disjuncts as ``frozenset`` of ``(name, value)`` pairs, free names mapped to None."""
        out = set()
        for d in self.disjuncts:
            items = set(d.values().items()) | {(c, None) for c in d.free}
            out.add(frozenset(items))
        return out

    def __str__(self):
        if not self.disjuncts:
            return "false"
        return " or ".join(f"{{{d}}}" for d in self.disjuncts)


@dataclass(frozen=True)
class PostState:
    """Pending formulas, collected equations ``(lhs, rhs)``, other literals, assignment."""

    pending: tuple = ()
    equations: tuple = ()
    others: tuple = ()
    assignment: tuple = ()

    def values(self) -> dict:
        return {a.coefficient: a.value for a in self.assignment}

    def assign(self, name: str, value) -> "PostState":
        return replace(self, assignment=self.assignment + (AssignmentAtom(name, Fraction(value)),))


# -- univariate solving ---------------------------------------------------------


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def solve_univariate(p: Polynomial, name: str) -> list:
    """Real roots of ``p`` (degree 1 or 2 in ``name`` only), ascending.

    Raises NoRationalRoot when the roots exist but are irrational.
    """
    coeffs = p.univariate_coefficients(name)
    degree = len(coeffs) - 1
    if degree == 1:
        c0, c1 = coeffs
        return [-c0 / c1]
    if degree == 2:
        c0, c1, c2 = coeffs
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0:
            return []
        root = _rational_sqrt(disc)
        if root is None:
            raise NoRationalRoot(f"{p} = 0 has irrational roots")
        return sorted({(-c1 - root) / (2 * c2), (-c1 + root) / (2 * c2)})
    raise ValueError(f"expected degree 1 or 2 in {name}, got {degree}")


# -- equation steps -------------------------------------------------------------


def _evaluable(e: E.Expr, assigned) -> bool:
    return E.can_evaluate(e, assigned)


def _unassigned_coef(e: E.Expr, assigned) -> Optional[str]:
    if isinstance(e, E.Coef) and e.name not in assigned:
        return e.name
    return None


def _linear_head(s: E.Expr, assigned):
    """Match ``c + s1*d`` (or ``c + d``); return ``(c, s1, d)``."""
    if not (isinstance(s, E.Sum) and len(s.args) == 2):
        return None
    c = _unassigned_coef(s.args[0], assigned)
    second = s.args[1]
    d = _unassigned_coef(second, assigned)
    s1 = E.Const(1)
    if d is None and isinstance(second, E.Prod):
        d = _unassigned_coef(second.args[-1], assigned)
        rest = second.args[:-1]
        s1 = rest[0] if len(rest) == 1 else E.Prod(rest)
        if not _evaluable(s1, assigned):
            return None
    if c is None or d is None or c == d:
        return None
    return c, s1, d


def _is_pair_partner(s: E.Expr, c: str, d: str) -> bool:
    return (
        isinstance(s, E.Sum)
        and len(s.args) == 2
        and s.args[0] == E.Coef(c)
        and s.args[1] == E.Coef(d)
    )


def step_equation(state: PostState) -> tuple:
    """Consume the head equation by the first applicable rule.

    Returns the successor states: none for false, one normally, several when
    a quadratic has two roots.  Raises NoSolvedForm when no rule applies.
    """
    if not state.equations:
        raise ValueError("no equation to process")
    (s, t), rest = state.equations[0], state.equations[1:]
    alpha = state.values()
    nxt = replace(state, equations=rest)

    # 1. both sides evaluate: keep going or fail the branch
    if _evaluable(s, alpha) and _evaluable(t, alpha):
        return (nxt,) if E.evaluate(s, alpha) == E.evaluate(t, alpha) else ()

    t_ok = _evaluable(t, alpha)

    # 2. coefficient = value
    c = _unassigned_coef(s, alpha)
    if c is not None and t_ok:
        return (nxt.assign(c, E.evaluate(t, alpha)),)

    # 3. a single unassigned coefficient occurring at most quadratically
    if t_ok and not E.count_apps(s) and not E.variables(s):
        open_coefs = E.coefficients(s) - set(alpha)
        if len(open_coefs) == 1:
            (c,) = open_coefs
            residual = to_polynomial(s).partial(alpha) - E.evaluate(t, alpha)
            if residual.is_constant():
                return (nxt,) if residual.is_zero() else ()
            if residual.degree(c) <= 2:
                roots = solve_univariate(residual, c)
                return tuple(nxt.assign(c, v) for v in roots)

    # 4. c + s1*d = t together with a later c + d = t'
    head = _linear_head(s, alpha)
    if head is not None and t_ok:
        c, s1, d = head
        for i, (s2, t2) in enumerate(rest):
            if _is_pair_partner(s2, c, d) and _evaluable(t2, alpha):
                k = E.evaluate(s1, alpha)
                if k == 1:
                    raise NoSolvedForm(f"singular linear pair in {c}, {d}")
                dv = (E.evaluate(t, alpha) - E.evaluate(t2, alpha)) / (k - 1)
                cv = E.evaluate(t2, alpha) - dv
                remaining = rest[:i] + rest[i + 1 :]
                return (replace(state, equations=remaining).assign(d, dv).assign(c, cv),)

    raise NoSolvedForm(
        f"no rule applies to {E.format_expr(s)} = {E.format_expr(t)}"
    )


def finalize(state: PostState, coefficients) -> SolvedForm:
    """Check the collected order literals against the finished assignment."""
    if state.equations or state.pending:
        raise ValueError("finalize needs an exhausted state")
    alpha = state.values()
    for lit in state.others:
        if not (_evaluable(lit.lhs, alpha) and _evaluable(lit.rhs, alpha)):
            raise NoSolvedForm(f"cannot evaluate {F.format_formula(lit)} under the assignment")
    for lit in state.others:
        if not F.holds(lit, alpha):
            return SolvedForm(())
    free = tuple(c for c in coefficients if c not in alpha)
    return SolvedForm((Assignment(state.assignment, free),))


def _run(state: PostState, coefficients) -> list:
    while state.pending:
        phi, rest = state.pending[0], state.pending[1:]
        if isinstance(phi, F.And):
            state = replace(state, pending=tuple(phi.args) + rest)
        elif isinstance(phi, F.Or):
            out = []
            for arg in phi.args:
                out.extend(_run(replace(state, pending=(arg,) + rest), coefficients))
            return out
        elif isinstance(phi, F.Eq):
            state = replace(state, pending=rest, equations=state.equations + ((phi.lhs, phi.rhs),))
        elif isinstance(phi, F.Cmp):
            state = replace(state, pending=rest, others=state.others + (phi,))
        elif isinstance(phi, F.Bool):
            if not phi.value:
                return []
            state = replace(state, pending=rest)
        else:
            raise NoSolvedForm(f"unsupported formula {F.format_formula(phi)}")

    while state.equations:
        successors = step_equation(state)
        if len(successors) != 1:
            out = []
            for s in successors:
                out.extend(_run(s, coefficients))
            return out
        state = successors[0]
    return list(finalize(state, coefficients).disjuncts)


def to_solved_form(formulas, coefficients=None) -> SolvedForm:
    """Solved form equivalent to the conjunction of ``formulas``.

    ``coefficients`` lists the template coefficients; those never assigned are
    returned as free.  Defaults to the symbols of the formulas, sorted.
    """
    formulas = tuple(formulas)
    mentioned = set()
    for phi in formulas:
        for term in F.terms(phi):
            if E.variables(term) or E.count_apps(term):
                raise ValueError(f"{F.format_formula(phi)} mentions variables or f")
            mentioned |= E.coefficients(term)
    if coefficients is None:
        coefficients = sorted(mentioned)
    unknown = mentioned - set(coefficients)
    if unknown:
        raise ValueError(f"formulas mention non-coefficient symbols {sorted(unknown)}")
    return SolvedForm(tuple(_run(PostState(pending=formulas), tuple(coefficients))))

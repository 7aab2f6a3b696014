"""Quantifier elimination for universally quantified polynomial identities.

A real polynomial vanishes for all values of its quantified variables exactly
when each of its coefficients with respect to those variables is zero (R is
infinite), so eliminating the universal quantifiers reduces to collecting
coefficients.  Inequalities are out of reach of this argument and never get
here: classify_fragment rejects them first.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import expr as E
from . import formula as F
from .poly import coefficients_wrt


@dataclass(frozen=True)
class CoefficientConstraint:
    """Conjunction ``p = 0`` over ``equations``; the empty conjunction is true."""

    equations: tuple

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))

    def symbols(self) -> set:
        return {s for p in self.equations for s in p.symbols()}

    def is_unsatisfiable(self) -> bool:
        """Syntactically false: contains a nonzero constant."""
        return any(p.is_constant() and p for p in self.equations)

    def satisfied_by(self, env) -> bool:
        return all(p.evaluate(env) == 0 for p in self.equations)

    def formulas(self, variables=frozenset()) -> list:
        """Each polynomial as the equation ``p = 0`` for the postprocessor."""
        return [F.Eq(p.to_expr(variables), E.Const(0)) for p in self.equations]

    def __str__(self):
        if not self.equations:
            return "true"
        return " and ".join(f"{p} = 0" for p in self.equations)


def normalize_constraint(c: CoefficientConstraint) -> CoefficientConstraint:
    """Drop zeros, make each polynomial primitive with positive leading coefficient, dedupe.

    Purely syntactic; first occurrence order is kept.
    """
    seen = {}
    for p in c.equations:
        if p.is_zero():
            continue
        q = p.primitive()
        seen.setdefault(q, None)
    return CoefficientConstraint(tuple(seen))


def eliminate(inlined, variables) -> CoefficientConstraint:
    """Eliminate ``forall variables`` from the conjunction of ``p = 0`` for each inlined p."""
    variables = set(variables)
    collected = []
    for p in inlined:
        collected.extend(coefficients_wrt(p, variables).values())
    for p in collected:
        leaked = p.symbols() & variables
        if leaked:
            raise AssertionError(f"quantified variables {sorted(leaked)} survived elimination")
    return normalize_constraint(CoefficientConstraint(tuple(collected)))

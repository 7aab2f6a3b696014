"""Problem records, fragment classification and the bundled corpus."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from . import expr as E
from . import formula as F
from .errors import CorpusError, ParseError, UnsupportedFragment

ORDER_MARKERS = {
    # name: (premise comparison, conclusion comparison)
    "increasing": ("<", "<"),
    "decreasing": ("<", ">"),
    "nondecreasing": ("<=", "<="),
    "nonincreasing": ("<=", ">="),
}


def order_marker_formula(name: str) -> F.Formula:
    premise, conclusion = ORDER_MARKERS[name]
    x, y = E.Var("x"), E.Var("y")
    return F.Forall(("x", "y"), F.Implies(F.Cmp(premise, x, y), F.Cmp(conclusion, E.f(x), E.f(y))))


@dataclass(frozen=True)
class SideCondition:
    """An assertion the equational pipeline cannot use but emission keeps.

    ``marker`` names a built-in condition such as ``increasing``; otherwise
    ``text`` is the assertion as written.
    """

    text: str
    formula: F.Formula
    marker: Optional[str] = None

    @classmethod
    def from_marker(cls, name: str) -> "SideCondition":
        return cls(name, order_marker_formula(name), name)

    @property
    def is_order(self) -> bool:
        return self.marker is not None or any(
            isinstance(n, F.Cmp) for n in _atoms(self.formula)
        )


def _atoms(phi):
    if isinstance(phi, (F.Eq, F.Cmp)):
        yield phi
    elif isinstance(phi, F.Not):
        yield from _atoms(phi.arg)
    elif isinstance(phi, (F.And, F.Or)):
        for a in phi.args:
            yield from _atoms(a)
    elif isinstance(phi, F.Implies):
        yield from _atoms(phi.lhs)
        yield from _atoms(phi.rhs)
    elif isinstance(phi, (F.Forall, F.Exists)):
        yield from _atoms(phi.body)


@dataclass(frozen=True)
class SolutionCandidate:
    """A handwritten solution ``f(x) = body`` with optional free parameters."""

    body: E.Expr
    params: tuple = ()
    constraints: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if E.count_apps(self.body):
            raise ValueError("a solution body cannot mention f")
        extra = E.symbols(self.body) - {"x"} - set(self.params)
        if extra:
            raise ValueError(f"solution body uses undeclared symbols {sorted(extra)}")

    def identity(self) -> F.Formula:
        """``exists params . constraints and forall x . f(x) = body``."""
        ident = F.Forall(("x",), F.Eq(E.f(E.Var("x")), self._body_over_vars()))
        if self.params:
            parts = [_params_as_vars(c, self.params) for c in self.constraints]
            return F.Exists(self.params, F.conj([*parts, ident]))
        return ident

    def _body_over_vars(self):
        return E.substitute(self.body, {p: E.Var(p) for p in self.params})

    def __str__(self):
        s = f"f(x) = {E.format_expr(self.body)}"
        if self.params:
            s += " for " + ", ".join(self.params) + " in R"
        if self.constraints:
            s += " with " + " and ".join(map(str, self.constraints))
        return s


def _params_as_vars(phi, params):
    return F.map_terms(phi, lambda t: E.substitute(t, {p: E.Var(p) for p in params}))


@dataclass(frozen=True)
class Problem:
    name: str
    equations: tuple
    side_conditions: tuple = ()
    solutions: tuple = ()
    domain: str = "Real"

    def __post_init__(self):
        for attr in ("equations", "side_conditions", "solutions"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        if not self.equations:
            raise ValueError(f"problem {self.name} has no equations")

    def formulas(self) -> list:
        """All assertions as closed formulas, equations first."""
        out = [F.equation_formula(eq) for eq in self.equations]
        out.extend(sc.formula for sc in self.side_conditions)
        return out

    def variables(self) -> set:
        return {v for eq in self.equations for v in eq.variables}


@dataclass(frozen=True)
class Fragment:
    equational: bool
    reason: Optional[str] = None

    def __str__(self):
        return "Equational" if self.equational else f"UnsupportedFragment({self.reason})"


EQUATIONAL = Fragment(True)


def classify_fragment(p: Problem) -> Fragment:
    """Is the problem a conjunction of universally quantified real polynomial equations?

    Division never reaches a Problem (the parser rejects it) and literals are
    always rational, so only the domain and side conditions matter here.
    """
    if p.domain != "Real":
        return Fragment(False, f"{p.domain} domain")
    if any(sc.is_order for sc in p.side_conditions):
        return Fragment(False, "order side-condition")
    if p.side_conditions:
        return Fragment(False, "non-equational assertion")
    return EQUATIONAL


def require_equational(p: Problem) -> None:
    frag = classify_fragment(p)
    if not frag.equational:
        raise UnsupportedFragment(frag.reason)


# -- corpus -----------------------------------------------------------------------

CORPUS_SUFFIX = ".feq"


def corpus_dir():
    return resources.files("feq") / "corpus"


def load_problem_file(path) -> Problem:
    from .parser import parse_problem

    text = Path(path).read_text(encoding="utf-8")
    return parse_problem(text)


def load_corpus(directory=None) -> list:
    """Parse every ``*.feq`` file, bundled corpus by default, sorted by file name."""
    from .parser import parse_problem

    root = corpus_dir() if directory is None else Path(directory)
    problems = []
    entries = sorted((e for e in root.iterdir() if e.name.endswith(CORPUS_SUFFIX)), key=lambda e: e.name)
    for entry in entries:
        try:
            p = parse_problem(entry.read_text(encoding="utf-8"))
        except (ParseError, UnsupportedFragment, ValueError) as exc:
            raise CorpusError(f"{entry.name}: {exc}") from exc
        expected = entry.name[: -len(CORPUS_SUFFIX)]
        if p.name != expected:
            raise CorpusError(f"{entry.name}: declares problem {p.name}, expected {expected}")
        problems.append(p)
    return problems


def corpus_problem(name: str, directory=None) -> Problem:
    for p in load_corpus(directory):
        if p.name == name:
            return p
    raise CorpusError(f"no bundled problem named {name!r}")

"""Prover input generation: SMT-LIB2 queries and unit-equality (TPTP) tasks.

Every SMT-LIB2 query is built as a list of s-expressions first and printed
afterwards, so ``read_sexprs(query.text) == list(query.commands)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import expr as E
from . import formula as F
from .errors import NotUnitEquational, ParseError
from .problem import Problem, SolutionCandidate, classify_fragment
from .template import Kind, Template, Variant, instantiate, membership_identity, verification_obligation

LOGIC = "AUFNIRA"
WITNESS = "w"

# -- s-expressions ------------------------------------------------------------

_SIMPLE_SYMBOL = re.compile(r"^[A-Za-z~!@$%^&*_+=<>.?/\-][A-Za-z0-9~!@$%^&*_+=<>.?/\-]*$")


def symbol(name: str) -> str:
    return name if _SIMPLE_SYMBOL.match(name) else f"|{name}|"


def to_text(sx) -> str:
    if isinstance(sx, str):
        return sx
    return "(" + " ".join(to_text(s) for s in sx) + ")"


def read_sexprs(text: str) -> list:
    """Parse SMT-LIB2 text into nested lists of atom strings; comments are dropped."""
    stack = [[]]
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch == "(":
            stack.append([])
            i += 1
        elif ch == ")":
            if len(stack) == 1:
                raise ParseError(f"unbalanced ')' at offset {i}")
            done = stack.pop()
            stack[-1].append(done)
            i += 1
        elif ch == '"':
            j = i + 1
            while True:
                if j >= n:
                    raise ParseError("unterminated string literal")
                if text[j] == '"':
                    if j + 1 < n and text[j + 1] == '"':
                        j += 2
                        continue
                    break
                j += 1
            stack[-1].append(text[i : j + 1])
            i = j + 1
        elif ch == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise ParseError("unterminated quoted symbol")
            stack[-1].append(text[i : j + 1])
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '();"|':
                j += 1
            stack[-1].append(text[i:j])
            i = j
    if len(stack) != 1:
        raise ParseError("unbalanced '(' in input")
    return stack[0]


def _literal(value: Fraction, sort: str):
    mag = abs(value)
    suffix = ".0" if sort == "Real" else ""
    if mag.denominator == 1:
        out = f"{mag.numerator}{suffix}"
    else:
        out = ["/", f"{mag.numerator}{suffix}", f"{mag.denominator}{suffix}"]
    return ["-", out] if value < 0 else out


def term_sexpr(e: E.Expr, sort: str = "Real"):
    if isinstance(e, E.Const):
        return _literal(e.value, sort)
    if isinstance(e, (E.Var, E.Coef)):
        return symbol(e.name)
    if isinstance(e, E.App):
        return ["f", term_sexpr(e.arg, sort)]
    if isinstance(e, E.Sum):
        return ["+", *(term_sexpr(a, sort) for a in e.args)]
    if isinstance(e, E.Prod):
        return ["*", *(term_sexpr(a, sort) for a in e.args)]
    if isinstance(e, E.Neg):
        return ["-", term_sexpr(e.arg, sort)]
    if isinstance(e, E.Pow):
        base = term_sexpr(e.base, sort)
        return base if e.exp == 1 else ["*", *([base] * e.exp)]
    raise TypeError(f"not an expression: {e!r}")


def formula_sexpr(phi: F.Formula, sort: str = "Real"):
    if isinstance(phi, F.Eq):
        return ["=", term_sexpr(phi.lhs, sort), term_sexpr(phi.rhs, sort)]
    if isinstance(phi, F.Cmp):
        return [phi.op, term_sexpr(phi.lhs, sort), term_sexpr(phi.rhs, sort)]
    if isinstance(phi, F.Not):
        return ["not", formula_sexpr(phi.arg, sort)]
    if isinstance(phi, F.And):
        return ["and", *(formula_sexpr(a, sort) for a in phi.args)] if phi.args else "true"
    if isinstance(phi, F.Or):
        return ["or", *(formula_sexpr(a, sort) for a in phi.args)] if phi.args else "false"
    if isinstance(phi, F.Implies):
        return ["=>", formula_sexpr(phi.lhs, sort), formula_sexpr(phi.rhs, sort)]
    if isinstance(phi, (F.Forall, F.Exists)):
        q = "forall" if isinstance(phi, F.Forall) else "exists"
        return [q, [[symbol(v), sort] for v in phi.variables], formula_sexpr(phi.body, sort)]
    if isinstance(phi, F.Bool):
        return "true" if phi.value else "false"
    raise TypeError(f"not a formula: {phi!r}")


# -- SMT-LIB2 queries -----------------------------------------------------------


@dataclass(frozen=True)
class Smt2Query:
    problem: str
    kind: str  # find | prove | check | tv | unique
    commands: tuple
    expected: str  # sat | unsat
    index: Optional[int] = None
    template: Optional[Kind] = None
    variant: Optional[Variant] = None

    @property
    def label(self) -> str:
        if self.kind == "check":
            return f"check{self.index}"
        if self.kind == "tv":
            return f"{self.template.cli_name}.{self.variant.value}.tv"
        return self.kind

    @property
    def filename(self) -> str:
        return f"{self.problem}.{self.label}.smt2"

    @property
    def text(self) -> str:
        head = f"; problem {self.problem}, query {self.label}, expected {self.expected}\n"
        return head + "".join(to_text(c) + "\n" for c in self.commands)


def _query(p: Problem, kind, assertions, expected, constants=(), declare_f=True, **extra) -> Smt2Query:
    sort = p.domain
    cmds = [["set-logic", LOGIC], ["set-info", ":status", expected]]
    if declare_f:
        cmds.append(["declare-fun", "f", [sort], sort])
    for c in constants:
        cmds.append(["declare-const", symbol(c), sort])
    for phi in assertions:
        if phi == F.TRUE:
            continue
        cmds.append(["assert", formula_sexpr(phi, sort)])
    cmds.append(["check-sat"])
    return Smt2Query(p.name, kind, tuple(_freeze(c) for c in cmds), expected, **extra)


def _freeze(sx):
    # lists compare equal to what read_sexprs returns; keep lists, copy deeply
    return sx if isinstance(sx, str) else [_freeze(s) for s in sx]


def negated_solutions(candidates) -> F.Formula:
    """``not (S1 or S2 or ...)`` with negation pushed inward."""
    return F.negate(F.disj(c.identity() for c in candidates))


def emit_find(p: Problem) -> Smt2Query:
    return _query(p, "find", p.formulas(), "sat")


def emit_prove(p: Problem) -> Smt2Query:
    return _query(p, "prove", [*p.formulas(), negated_solutions(p.solutions)], "unsat")


def emit_check(p: Problem, s: SolutionCandidate, index: Optional[int] = None, inline: bool = False) -> Smt2Query:
    """Candidate identity together with the negated specification.

    Parameters become declared constants, so unsat means the candidate solves
    the problem for every admissible parameter value.  With ``inline`` the
    candidate is substituted for f and f is not declared.
    """
    if index is None:
        index = p.solutions.index(s) + 1
    spec = F.conj(p.formulas())
    if inline:
        spec = F.map_terms(spec, lambda t: E.map_apps(t, lambda u: E.substitute(s.body, {"x": u})))
        assertions = [*s.constraints, F.negate(spec)]
    else:
        ident = F.Forall(("x",), F.Eq(E.f(E.Var("x")), s.body))
        assertions = [*s.constraints, ident, F.negate(spec)]
    return _query(p, "check", assertions, "unsat", constants=s.params, declare_f=not inline, index=index)


def _skolemize(phi: F.Formula):
    """Replace a leading single-variable ``exists`` by a fresh declared constant."""
    if isinstance(phi, F.Exists) and len(phi.variables) == 1:
        (v,) = phi.variables
        body = F.map_terms(phi.body, lambda t: E.substitute(t, {v: E.Coef(WITNESS)}))
        return body, (WITNESS,)
    return phi, ()


def emit_template_verification(p: Problem, t, variant: Variant) -> Smt2Query:
    ob = verification_obligation(p, t, variant)
    assertions = list(ob.assertions)
    constants = ()
    if variant is Variant.SECOND:
        assertions[-1], constants = _skolemize(assertions[-1])
    return _query(p, "tv", assertions, "unsat", constants=constants, template=ob.kind, variant=variant)


def emit_uniqueness(p: Problem, solved, template: Template) -> Optional[Smt2Query]:
    """Specification plus the negation of every solution in the solved form; None if it is empty."""
    if solved.is_bottom:
        return None
    candidates = [instantiate(template, d) for d in solved]
    return _query(p, "unique", [*p.formulas(), negated_solutions(candidates)], "unsat", template=template.kind)


def all_queries(p: Problem, inline_check: bool = False) -> list:
    out = [emit_find(p), emit_prove(p)]
    out.extend(emit_check(p, s, i, inline_check) for i, s in enumerate(p.solutions, start=1))
    return out


# -- unit equality ---------------------------------------------------------------


@dataclass(frozen=True)
class FOTerm:
    """First-order term: a variable when ``args is None``, else an application."""

    name: str
    args: Optional[tuple] = None

    @property
    def is_var(self) -> bool:
        return self.args is None


def _app(name, *args) -> FOTerm:
    return FOTerm(name, tuple(args))


def _var(name) -> FOTerm:
    return FOTerm(name, None)


ZERO = _app("zero")
ONE_T = _app("one")

RING_AXIOMS = (
    ("plus_commutative", _app("plus", _var("x"), _var("y")), _app("plus", _var("y"), _var("x"))),
    (
        "plus_associative",
        _app("plus", _app("plus", _var("x"), _var("y")), _var("z")),
        _app("plus", _var("x"), _app("plus", _var("y"), _var("z"))),
    ),
    ("plus_zero", _app("plus", _var("x"), ZERO), _var("x")),
    ("plus_inverse", _app("plus", _var("x"), _app("neg", _var("x"))), ZERO),
    ("times_commutative", _app("times", _var("x"), _var("y")), _app("times", _var("y"), _var("x"))),
    (
        "times_associative",
        _app("times", _app("times", _var("x"), _var("y")), _var("z")),
        _app("times", _var("x"), _app("times", _var("y"), _var("z"))),
    ),
    ("times_one", _app("times", _var("x"), ONE_T), _var("x")),
    (
        "distributivity",
        _app("times", _var("x"), _app("plus", _var("y"), _var("z"))),
        _app("plus", _app("times", _var("x"), _var("y")), _app("times", _var("x"), _var("z"))),
    ),
)

SIGNATURE_SYMBOLS = {"zero", "one", "plus", "times", "neg", "f"}


def _integer_term(n: int) -> FOTerm:
    if n < 0:
        return _app("neg", _integer_term(-n))
    if n == 0:
        return ZERO
    out = ONE_T
    for _ in range(n - 1):
        out = _app("plus", out, ONE_T)
    return out


def _fold(name, terms):
    out = terms[0]
    for t in terms[1:]:
        out = _app(name, out, t)
    return out


def fo_term(e: E.Expr, constants=frozenset()) -> FOTerm:
    """Ring term for an expression; symbols in ``constants`` become constants."""
    if isinstance(e, E.Const):
        if e.value.denominator != 1:
            raise NotUnitEquational(f"non-integer literal {E.format_const(e.value)}")
        return _integer_term(e.value.numerator)
    if isinstance(e, (E.Var, E.Coef)):
        return _app(e.name) if e.name in constants else _var(e.name)
    if isinstance(e, E.App):
        return _app("f", fo_term(e.arg, constants))
    if isinstance(e, E.Sum):
        return _fold("plus", [fo_term(a, constants) for a in e.args])
    if isinstance(e, E.Prod):
        return _fold("times", [fo_term(a, constants) for a in e.args])
    if isinstance(e, E.Neg):
        return _app("neg", fo_term(e.arg, constants))
    if isinstance(e, E.Pow):
        return _fold("times", [fo_term(e.base, constants)] * e.exp)
    raise TypeError(f"not an expression: {e!r}")


@dataclass(frozen=True)
class UnitEqTask:
    problem: str
    kind: Kind
    constant: str
    axioms: tuple  # (name, lhs, rhs)
    hypotheses: tuple  # (lhs, rhs)
    goal: tuple  # (lhs, rhs)

    @property
    def filename(self) -> str:
        return f"{self.problem}.{self.kind.cli_name}.p"

    def variables(self) -> list:
        names = []

        def collect(t):
            if t.is_var:
                if t.name not in names:
                    names.append(t.name)
            else:
                for a in t.args:
                    collect(a)

        for _, lhs, rhs in self.axioms:
            collect(lhs)
            collect(rhs)
        for lhs, rhs in self.hypotheses:
            collect(lhs)
            collect(rhs)
        return names

    def to_tptp(self) -> str:
        upper = _tptp_variable_names(self.variables())

        def show(t):
            if t.is_var:
                return upper[t.name]
            if not t.args:
                return t.name
            return f"{t.name}({','.join(show(a) for a in t.args)})"

        lines = [f"% problem {self.problem}, template {self.kind.cli_name}: prove {show(self.goal[0])} = {show(self.goal[1])}"]
        for name, lhs, rhs in self.axioms:
            lines.append(f"cnf({name}, axiom, {show(lhs)} = {show(rhs)}).")
        for i, (lhs, rhs) in enumerate(self.hypotheses, start=1):
            lines.append(f"cnf(hypothesis_{i}, hypothesis, {show(lhs)} = {show(rhs)}).")
        lines.append(f"cnf(goal, negated_conjecture, {show(self.goal[0])} != {show(self.goal[1])}).")
        return "\n".join(lines) + "\n"

    def to_legacy(self) -> str:
        """Sectioned NAME/MODE/SORTS/SIGNATURE/ORDERING/VARIABLES/EQUATIONS/CONCLUSION format."""

        def show(t):
            if t.is_var or not t.args:
                return t.name
            return f"{t.name}({','.join(show(a) for a in t.args)})"

        pad = " " * 12
        eqs = [f"{show(lhs)} = {show(rhs)}" for _, lhs, rhs in self.axioms]
        eqs += [f"{show(lhs)} = {show(rhs)}" for lhs, rhs in self.hypotheses]
        lines = [
            f"NAME        {self.problem}_{self.kind.cli_name}",
            "MODE        PROOF",
            "SORTS       R",
            f"SIGNATURE   zero, one, {self.constant}: -> R",
            f"{pad}neg, f: R -> R",
            f"{pad}plus, times: R R -> R",
            "ORDERING    LPO",
            f"{pad}f > times > plus > neg > {self.constant} > one > zero",
            f"VARIABLES   {', '.join(self.variables())}: R",
            "EQUATIONS   " + eqs[0],
            *(pad + e for e in eqs[1:]),
            f"CONCLUSION  {show(self.goal[0])} = {show(self.goal[1])}",
        ]
        return "\n".join(lines) + "\n"


def _tptp_variable_names(names) -> dict:
    out = {}
    used = set()
    for n in names:
        base = re.sub(r"[^A-Za-z0-9_]", "_", n)
        cand = base[0].upper() + base[1:]
        i = 1
        while cand in used:
            cand = f"{base[0].upper()}{base[1:]}_{i}"
            i += 1
        used.add(cand)
        out[n] = cand
    return out


def uniteq_eligibility(p: Problem) -> Optional[str]:
    """None when the problem can be stated as unit equations over a ring, else the reason."""
    frag = classify_fragment(p)
    if not frag.equational:
        return frag.reason
    for eq in p.equations:
        for side in (eq.lhs, eq.rhs):
            for node in E.walk(side):
                if isinstance(node, E.Const) and node.value.denominator != 1:
                    return f"non-integer literal {E.format_const(node.value)}"
    return None


def emit_uniteq(p: Problem, t) -> UnitEqTask:
    kind = t.kind if isinstance(t, Template) else t
    reason = uniteq_eligibility(p)
    if reason is not None:
        raise NotUnitEquational(reason)
    taken = p.variables() | SIGNATURE_SYMBOLS
    constant = "d"
    i = 0
    while constant in taken:
        i += 1
        constant = f"d{i}"
    # problem variables that collide with signature symbols get fresh names
    rename = {}
    for v in sorted(p.variables()):
        if v in SIGNATURE_SYMBOLS or v == constant:
            new = v + "_"
            while new in taken:
                new += "_"
            rename[v] = E.Var(new)
    hyps = []
    for eq in p.equations:
        lhs = E.substitute(eq.lhs, rename)
        rhs = E.substitute(eq.rhs, rename)
        hyps.append((fo_term(lhs), fo_term(rhs)))
    glhs, grhs = membership_identity(kind, constant)
    goal = (fo_term(glhs, {constant}), fo_term(grhs, {constant}))
    return UnitEqTask(p.name, kind, constant, RING_AXIOMS, tuple(hyps), goal)

"""Tokenizer and recursive-descent parser for terms, formulas and problem files.

Problem file syntax, one directive per line, ``#`` starts a comment::

    problem U3
    domain Real
    function f : Real -> Real
    assert forall x y . f(x+y) = f(x) + y
    solution f(x) = x + b  param b : Real

``condition increasing`` (or decreasing, nondecreasing, nonincreasing) adds an
order side condition.  A solution may constrain its parameters with
``where c > 0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import expr as E
from . import formula as F
from .errors import ParseError, UnboundVariable, UnknownIdentifier, UnsupportedFragment
from .problem import ORDER_MARKERS, Problem, SideCondition, SolutionCandidate

# Unicode and LaTeX spellings, so formulas pasted from typeset text or QE tools parse.
_ALIASES = {
    "−": "-", "·": "*", "×": "*", "≤": "<=", "≥": ">=", "≠": "!=",
    "∧": "and", "∨": "or", "¬": "not", "∀": "forall", "∃": "exists",
    "/\\": "and", "\\/": "or", "\\land": "and", "\\lor": "or", "\\lnot": "not",
    "\\neg": "not", "\\leq": "<=", "\\geq": ">=", "\\le": "<=", "\\ge": ">=",
    "\\neq": "!=", "\\ne": "!=", "\\forall": "forall", "\\exists": "exists",
    "\\cdot": "*", "==": "=",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<op>->|=>|<=|>=|!=|==|/\\|\\/|\\[A-Za-z]+|[-+*^/()=<>.,:]|[−·×≤≥≠∧∨¬∀∃])
  | (?P<id>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)

KEYWORDS = {"forall", "exists", "and", "or", "not", "param", "where", "true", "false"}
RELATIONS = {"=", "!=", "<=", ">=", "<", ">"}


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "op", "id", "end"
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1, column_offset: int = 0) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1 + column_offset)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            tok = _ALIASES.get(tok, tok)
            if kind == "op" and tok.startswith("\\"):
                raise ParseError(f"unknown macro {tok!r}", line, pos + 1 + column_offset)
            if tok in ("and", "or", "not", "forall", "exists"):
                kind = "id"
            tokens.append(Token(kind, tok, line, pos + 1 + column_offset))
        pos = m.end()
    tokens.append(Token("end", "", line, len(text) + 1 + column_offset))
    return tokens


class _Parser:
    def __init__(self, tokens, variables=(), coefficients=()):
        self.tokens = tokens
        self.pos = 0
        self.bound = set(variables)
        self.coefficients = set(coefficients)

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def error(self, message, cls=ParseError, tok=None):
        tok = tok or self.tok
        return cls(message, tok.line, tok.column)

    def at(self, text) -> bool:
        return self.tok.kind != "end" and self.tok.text == text

    def accept(self, text) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.pos += 1
        return tok

    def expect_id(self) -> Token:
        tok = self.tok
        if tok.kind != "id" or tok.text in KEYWORDS:
            raise self.error(f"expected an identifier, found {tok.text or 'end of input'!r}")
        self.pos += 1
        return tok

    def expect_end(self):
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")

    # -- terms
    def term(self) -> E.Expr:
        args = [self.product()]
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.pos += 1
            nxt = self.product()
            args.append(nxt if op == "+" else E.negate(nxt))
        return args[0] if len(args) == 1 else E.Sum(tuple(args))

    def product(self) -> E.Expr:
        args = [self.unary()]
        while True:
            if self.at("*"):
                self.pos += 1
                args.append(self.unary())
            elif self.at("/"):
                raise self.error("division is not supported", UnsupportedFragment)
            else:
                break
        return args[0] if len(args) == 1 else E.Prod(tuple(args))

    def unary(self) -> E.Expr:
        if self.accept("-"):
            return E.negate(self.unary())
        return self.power()

    def power(self) -> E.Expr:
        base = self.atom()
        if self.accept("^"):
            tok = self.tok
            if tok.kind != "num" or "." in tok.text or int(tok.text) < 1:
                raise self.error("exponent must be a positive integer literal")
            self.pos += 1
            return E.Pow(base, int(tok.text))
        return base

    def atom(self) -> E.Expr:
        tok = self.tok
        if tok.kind == "num":
            self.pos += 1
            value = Fraction(tok.text)
            if self.at("/") and self.peek().kind == "num":
                self.pos += 1
                den = Fraction(self.tok.text)
                if den == 0:
                    raise self.error("zero denominator")
                self.pos += 1
                value = value / den
            return E.Const(value)
        if self.accept("("):
            inner = self.term()
            self.expect(")")
            return inner
        if tok.kind == "id" and tok.text not in KEYWORDS:
            self.pos += 1
            name = tok.text
            if self.at("("):
                if name != "f":
                    raise self.error(f"unknown function {name!r}", UnknownIdentifier, tok)
                self.pos += 1
                arg = self.term()
                self.expect(")")
                return E.App(arg)
            if name in self.bound:
                return E.Var(name)
            if name in self.coefficients:
                return E.Coef(name)
            if name == "f":
                raise self.error("f must be applied to an argument", ParseError, tok)
            raise self.error(f"variable {name!r} is not bound", UnboundVariable, tok)
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")

    # -- formulas
    def formula(self) -> F.Formula:
        lhs = self.disjunction()
        if self.accept("=>"):
            return F.Implies(lhs, self.formula())
        return lhs

    def disjunction(self) -> F.Formula:
        args = [self.conjunction()]
        while self.accept("or"):
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else F.Or(tuple(args))

    def conjunction(self) -> F.Formula:
        args = [self.negation()]
        while self.accept("and"):
            args.append(self.negation())
        return args[0] if len(args) == 1 else F.And(tuple(args))

    def negation(self) -> F.Formula:
        if self.accept("not"):
            return F.Not(self.negation())
        if self.at("forall") or self.at("exists"):
            return self.quantified()
        if self.accept("true"):
            return F.TRUE
        if self.accept("false"):
            return F.FALSE
        if self.at("("):
            start = self.pos
            try:
                return self.atom_formula()
            except (UnboundVariable, UnknownIdentifier):
                raise
            except ParseError:
                self.pos = start
            self.expect("(")
            inner = self.formula()
            self.expect(")")
            return inner
        return self.atom_formula()

    def quantified(self) -> F.Formula:
        kind = self.tok.text
        self.pos += 1
        names = []
        while not self.at("."):
            names.append(self.expect_id().text)
        if not names:
            raise self.error("quantifier without variables")
        self.expect(".")
        saved = set(self.bound)
        self.bound |= set(names)
        try:
            body = self.formula()
        finally:
            self.bound = saved
        return (F.Forall if kind == "forall" else F.Exists)(tuple(names), body)

    def atom_formula(self) -> F.Formula:
        lhs = self.term()
        tok = self.tok
        if tok.text not in RELATIONS or tok.kind != "op":
            raise self.error(f"expected a relation, found {tok.text or 'end of input'!r}")
        self.pos += 1
        rhs = self.term()
        if tok.text == "=":
            return F.Eq(lhs, rhs)
        if tok.text == "!=":
            return F.Ne(lhs, rhs)
        return F.Cmp(tok.text, lhs, rhs)


def parse_term(text: str, variables=(), coefficients=()) -> E.Expr:
    p = _Parser(tokenize(text), variables, coefficients)
    out = p.term()
    p.expect_end()
    return out


def parse_formula(text: str, coefficients=(), variables=()) -> F.Formula:
    """Parse a formula; names in ``coefficients`` become symbolic constants."""
    p = _Parser(tokenize(text), variables, coefficients)
    out = p.formula()
    p.expect_end()
    return out


def _as_equation(phi: F.Formula):
    names = []
    while isinstance(phi, F.Forall):
        names.extend(phi.variables)
        phi = phi.body
    if isinstance(phi, F.Eq):
        return E.Equation(phi.lhs, phi.rhs, tuple(dict.fromkeys(names)))
    return None


def parse_equation(text: str) -> E.Equation:
    phi = parse_formula(text)
    eq = _as_equation(phi)
    if eq is None:
        raise ParseError(f"not a universally quantified equation: {text!r}")
    return eq


# -- problem files ---------------------------------------------------------------


def _split_words(tokens, words):
    """Split a token list at top-level identifier tokens from ``words``."""
    segments = [("", [])]
    depth = 0
    for tok in tokens[:-1]:
        if tok.text == "(":
            depth += 1
        elif tok.text == ")":
            depth -= 1
        if depth == 0 and tok.kind == "id" and tok.text in words:
            segments.append((tok.text, []))
        else:
            segments[-1][1].append(tok)
    end = tokens[-1]
    return [(w, toks + [end]) for w, toks in segments]


def _parse_solution(tokens, line) -> SolutionCandidate:
    segments = _split_words(tokens, {"param", "where"})
    head = _Parser(segments[0][1])
    head.expect("f")
    head.expect("(")
    var = head.expect_id().text
    head.expect(")")
    head.expect("=")
    body_start = head.pos

    params = []
    where = []
    for word, toks in segments[1:]:
        if word == "param":
            p = _Parser(toks)
            while True:
                name = p.expect_id()
                if name.text == var or name.text == "f" or name.text in params:
                    raise p.error(f"bad parameter name {name.text!r}", tok=name)
                p.expect(":")
                sort = p.expect_id()
                if sort.text != "Real":
                    raise p.error(f"parameters must have sort Real, not {sort.text}", UnsupportedFragment, sort)
                params.append(name.text)
                if not p.accept(","):
                    break
            p.expect_end()
        else:
            where.append(toks)

    body_parser = _Parser(segments[0][1], (var,), params)
    body_parser.pos = body_start
    body = body_parser.term()
    body_parser.expect_end()
    if var != "x":
        body = E.substitute(body, {var: E.Var("x")})

    constraints = []
    for toks in where:
        p = _Parser(toks, (), params)
        phi = p.formula()
        p.expect_end()
        constraints.extend(phi.args if isinstance(phi, F.And) else (phi,))
    return SolutionCandidate(body, tuple(params), tuple(constraints))


def parse_problem(text: str) -> Problem:
    name = None
    domain = "Real"
    equations = []
    side = []
    solutions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        directive, _, rest = stripped.partition(" ")
        offset = indent + len(directive) + 1
        tokens = tokenize(rest, lineno, offset)
        p = _Parser(tokens)
        if directive == "problem":
            name = p.expect_id().text
            p.expect_end()
        elif directive == "domain":
            domain = p.expect_id().text
            if domain not in ("Real", "Int"):
                raise p.error(f"unknown domain {domain!r}", UnknownIdentifier)
            p.expect_end()
        elif directive == "function":
            fname = p.expect_id()
            if fname.text != "f":
                raise p.error("the unknown function must be called f", UnsupportedFragment, fname)
            p.expect(":")
            sorts = [p.expect_id()]
            p.expect("->")
            sorts.append(p.expect_id())
            p.expect_end()
            for sort in sorts:
                if sort.text not in ("Real", "Int"):
                    raise p.error(f"unknown sort {sort.text!r}", UnknownIdentifier, sort)
                if sort.text != "Real":
                    domain = sort.text
        elif directive == "assert":
            phi = p.formula()
            p.expect_end()
            eq = _as_equation(phi)
            if eq is not None:
                equations.append(eq)
            else:
                side.append(SideCondition(F.format_formula(phi), phi))
        elif directive == "condition":
            marker = p.expect_id()
            if marker.text not in ORDER_MARKERS:
                raise p.error(f"unknown condition {marker.text!r}", UnknownIdentifier, marker)
            p.expect_end()
            side.append(SideCondition.from_marker(marker.text))
        elif directive == "solution":
            solutions.append(_parse_solution(tokens, lineno))
        else:
            raise UnknownIdentifier(f"unknown directive {directive!r}", lineno, indent + 1)
    if name is None:
        raise ParseError("missing 'problem NAME' line")
    if not equations:
        raise ParseError(f"problem {name} has no equations")
    return Problem(name, tuple(equations), tuple(side), tuple(solutions), domain)


def format_problem(p: Problem) -> str:
    lines = [f"problem {p.name}", f"domain {p.domain}", f"function f : {p.domain} -> {p.domain}"]
    for eq in p.equations:
        lines.append(f"assert {eq}")
    for sc in p.side_conditions:
        lines.append(f"condition {sc.marker}" if sc.marker else f"assert {sc.text}")
    for s in p.solutions:
        line = f"solution f(x) = {E.format_expr(s.body)}"
        if s.params:
            line += "  param " + ", ".join(f"{n} : Real" for n in s.params)
        if s.constraints:
            line += " where " + " and ".join(F.format_formula(c) for c in s.constraints)
        lines.append(line)
    return "\n".join(lines) + "\n"

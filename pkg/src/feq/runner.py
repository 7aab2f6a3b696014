"""Pipeline orchestration: lazy and eager modes, solution checking, solver dispatch, reports."""

from __future__ import annotations

import configparser
import csv
import enum
import io
import os
import re
import shlex
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from . import expr as E
from .emit import (
    Smt2Query,
    UnitEqTask,
    all_queries,
    emit_template_verification,
    emit_uniqueness,
    emit_uniteq,
    uniteq_eligibility,
)
from .errors import NoSolvedForm, UnsupportedFragment
from .poly import to_polynomial
from .problem import Problem, SolutionCandidate, classify_fragment, require_equational
from .qe import CoefficientConstraint, eliminate
from .solved import SolvedForm, to_solved_form
from .template import (
    SEARCH_ORDER,
    TABLE_ORDER,
    Kind,
    Template,
    Variant,
    fits,
    function_instances,
    inline,
    instantiate,
)

DEFAULT_TIMEOUT = 60.0
PATH_ENV = "FEQ_SOLVER_PATH"
ANSWERS = ("sat", "unsat", "unknown", "timeout")


class Status(enum.Enum):
    PROVEN = "proven"
    DISPROVEN = "disproven"
    UNKNOWN = "unknown"

    @property
    def mark(self) -> str:
        return {"proven": "✓", "disproven": "×", "unknown": "−"}[self.value]


class Mode(enum.Enum):
    EAGER = "eager"
    LAZY = "lazy"


# -- configuration -------------------------------------------------------------


@dataclass(frozen=True)
class SolverConfig:
    """External commands by name; ``{file}`` in a command is replaced by the query path.

    ``solvers`` take SMT-LIB2 queries, ``uniteq_solvers`` take TPTP unit-equality tasks.
    """

    solvers: tuple = ()  # (name, command) pairs
    uniteq_solvers: tuple = ()
    timeout: float = DEFAULT_TIMEOUT

    def __post_init__(self):
        object.__setattr__(self, "solvers", tuple(self.solvers))
        object.__setattr__(self, "uniteq_solvers", tuple(self.uniteq_solvers))
        if not self.timeout > 0:
            raise ValueError(f"timeout must be positive, got {self.timeout}")

    @property
    def has_solvers(self) -> bool:
        return bool(self.solvers)

    @classmethod
    def from_text(cls, text: str) -> "SolverConfig":
        """Key-value config: ``timeout = 30``, ``solver.NAME = CMD``, ``uniteq.NAME = CMD``."""
        parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
        parser.optionxform = str
        parser.read_string("[feq]\n" + text)
        solvers, uniteq, timeout = [], [], DEFAULT_TIMEOUT
        for key, value in parser["feq"].items():
            if key == "timeout":
                timeout = float(value)
            elif key.startswith("solver."):
                solvers.append((key[len("solver."):], value))
            elif key.startswith("uniteq."):
                uniteq.append((key[len("uniteq."):], value))
            else:
                raise ValueError(f"unknown config key {key!r}")
        return cls(tuple(solvers), tuple(uniteq), timeout)

    @classmethod
    def from_file(cls, path) -> "SolverConfig":
        return cls.from_text(Path(path).read_text())


def parse_solver_spec(spec: str) -> tuple:
    """``NAME=CMD`` from the command line."""
    name, sep, cmd = spec.partition("=")
    if not sep or not name.strip() or not cmd.strip():
        raise ValueError(f"expected NAME=CMD, got {spec!r}")
    return name.strip(), cmd.strip()


def search_path() -> str:
    extra = os.environ.get(PATH_ENV)
    base = os.environ.get("PATH", os.defpath)
    return extra + os.pathsep + base if extra else base


# -- external solvers ------------------------------------------------------------


@dataclass(frozen=True)
class SolverResult:
    solver: str
    status: str  # one of ANSWERS
    elapsed: float = 0.0
    diagnostic: str = ""


_SZS = {
    "Unsatisfiable": "unsat",
    "Theorem": "unsat",
    "ContradictoryAxioms": "unsat",
    "Satisfiable": "sat",
    "CounterSatisfiable": "sat",
}


def parse_answer(output: str) -> Optional[str]:
    """First sat/unsat/unknown token, SZS status line, or completion-prover verdict."""
    for line in output.splitlines():
        tok = line.strip()
        if tok in ("sat", "unsat", "unknown"):
            return tok
        m = re.search(r"SZS status (\w+)", line)
        if m:
            return _SZS.get(m.group(1), "unknown")
        if re.search(r"\bgoal proved\b", line, re.IGNORECASE):
            return "unsat"
    return None


def _command_argv(command: str, path: str) -> list:
    argv = shlex.split(command)
    if any("{file}" in a for a in argv):
        return [a.replace("{file}", path) for a in argv]
    return argv + [path]


def run_command(name: str, command: str, text: str, suffix: str, timeout: float) -> SolverResult:
    """Write ``text`` to a temp file, run the command on it, parse the answer."""
    argv = _command_argv(command, "PLACEHOLDER")
    exe = shutil.which(argv[0], path=search_path())
    if exe is None:
        return SolverResult(name, "unknown", 0.0, f"command not found: {argv[0]}")
    with tempfile.TemporaryDirectory(prefix="feq-") as tmp:
        path = os.path.join(tmp, "query" + suffix)
        Path(path).write_text(text)
        argv = _command_argv(command, path)
        argv[0] = exe
        start = time.perf_counter()
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        except subprocess.TimeoutExpired:
            return SolverResult(name, "timeout", time.perf_counter() - start, f"no answer within {timeout}s")
        except OSError as exc:
            return SolverResult(name, "unknown", time.perf_counter() - start, str(exc))
        elapsed = time.perf_counter() - start
    answer = parse_answer(proc.stdout)
    if answer is None:
        snippet = (proc.stdout.strip() or proc.stderr.strip())[:200]
        return SolverResult(name, "unknown", elapsed, f"unparsable output (exit {proc.returncode}): {snippet}")
    return SolverResult(name, answer, elapsed)


def external_solve(query: Union[Smt2Query, UnitEqTask], config: SolverConfig, solver: Optional[str] = None) -> SolverResult:
    """Run the configured solvers on ``query``; the first sat/unsat answer wins.

    ``solver`` restricts the run to one named command.
    """
    if isinstance(query, UnitEqTask):
        pool, text, suffix = config.uniteq_solvers, query.to_tptp(), ".p"
    else:
        pool, text, suffix = config.solvers, query.text, ".smt2"
    if solver is not None:
        pool = tuple((n, c) for n, c in pool if n == solver)
    if not pool:
        return SolverResult(solver or "", "unknown", 0.0, "no solver configured")
    results = [run_command(name, cmd, text, suffix, config.timeout) for name, cmd in pool]
    for r in results:
        if r.status in ("sat", "unsat"):
            return r
    return results[0]


# -- checking ----------------------------------------------------------------------


def check_solution(p: Problem, s: SolutionCandidate) -> bool:
    """Is ``f(x) = s.body`` an identity solution of every equation, parameters symbolic?"""
    require_equational(p)
    for eq in p.equations:
        lhs = E.map_apps(eq.lhs, lambda u: E.substitute(s.body, {"x": u}))
        rhs = E.map_apps(eq.rhs, lambda u: E.substitute(s.body, {"x": u}))
        if not (to_polynomial(lhs) - to_polynomial(rhs)).is_zero():
            return False
    return True


# -- reports -------------------------------------------------------------------------


@dataclass
class TemplateResult:
    kind: Kind
    status: Status = Status.UNKNOWN
    constraint: Optional[CoefficientConstraint] = None
    solved: Optional[SolvedForm] = None
    error: Optional[str] = None
    candidates: list = field(default_factory=list)  # SolutionCandidate per disjunct
    checks: list = field(default_factory=list)  # bool per disjunct
    verification: dict = field(default_factory=dict)  # query label -> SolverResult
    template: Optional[Template] = None


@dataclass
class PipelineReport:
    problem: str
    mode: Mode
    templates: dict = field(default_factory=dict)  # Kind -> TemplateResult
    solved_kind: Optional[Kind] = None
    verified: bool = False
    checks: list = field(default_factory=list)  # (candidate text, True/False/None)
    external: dict = field(default_factory=dict)  # query label -> SolverResult
    unsupported: Optional[str] = None
    degraded: bool = False
    conflicts: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    queries: list = field(default_factory=list)

    @property
    def solved(self) -> Optional[SolvedForm]:
        if self.solved_kind is None:
            return None
        return self.templates[self.solved_kind].solved

    def status(self, kind: Kind) -> Status:
        r = self.templates.get(kind)
        return r.status if r else Status.UNKNOWN

    def solution_text(self) -> str:
        if self.solved_kind is None:
            return ""
        r = self.templates[self.solved_kind]
        return " | ".join(str(c) for c in r.candidates) if r.candidates else "no solution"

    def prove_status(self) -> Status:
        r = self.external.get("prove")
        if r is None:
            return Status.UNKNOWN
        return {"unsat": Status.PROVEN, "sat": Status.DISPROVEN}.get(r.status, Status.UNKNOWN)

    def check_status(self) -> Status:
        values = [ok for _, ok in self.checks]
        if not values or any(ok is None for ok in values):
            return Status.UNKNOWN
        return Status.PROVEN if all(values) else Status.DISPROVEN


class _Clock:
    def __init__(self, timings: dict):
        self.timings = timings

    def add(self, stage: str, start: float):
        self.timings[stage] = self.timings.get(stage, 0.0) + time.perf_counter() - start


def _known_functions(report: PipelineReport, p: Problem) -> list:
    """Concrete solutions established internally: checked candidates and checked disjuncts."""
    out = []
    if report.unsupported is None:
        for s in p.solutions:
            if check_solution(p, s):
                out.extend(function_instances(s))
    for r in report.templates.values():
        for cand, ok in zip(r.candidates, r.checks):
            if ok:
                out.extend(function_instances(cand))
    return out


def _settle_statuses(report: PipelineReport, p: Problem) -> None:
    """Derive per-template statuses from solver answers and known solutions.

    Disproven: a known solution lies outside the class, or an obligation came
    back sat.  Proven: an obligation or unit-equality goal came back unsat, or
    a solved form was shown complete and all its members lie in the class.
    Known solutions are established by exact checking, so they override a
    contradicting solver answer; the contradiction is kept in ``conflicts``.
    """
    known = _known_functions(report, p)
    complete = [r for r in report.templates.values() if "unique" in r.verification and r.verification["unique"].status == "unsat"]
    for kind in SEARCH_ORDER:
        r = report.templates.setdefault(kind, TemplateResult(kind))
        answers = {k: v for k, v in r.verification.items() if k != "unique"}
        outside = [fn for fn in known if not fits(kind, fn)]
        if outside:
            r.status = Status.DISPROVEN
            for label, res in answers.items():
                if res.status == "unsat":
                    report.conflicts.append(f"{kind.cli_name}: {res.solver} answered unsat on {label}, but f(x) = {outside[0]} is a solution")
        elif any(v.status == "unsat" for v in answers.values()):
            r.status = Status.PROVEN
        elif any(v.status == "sat" for v in answers.values()):
            r.status = Status.DISPROVEN
        else:
            for c in complete:
                if all(_family_fits(kind, cand) for cand in c.candidates):
                    r.status = Status.PROVEN
                    break


def _family_fits(kind: Kind, cand: SolutionCandidate) -> bool:
    """Every member of a parametric family fits, judged on the body's shape in x."""
    poly = to_polynomial(cand.body)
    degrees = {m.exponent("x") for m in poly.terms}
    shape = {
        Kind.CONSTANT: {0},
        Kind.MONOMIAL_LINEAR: {1},
        Kind.LINEAR: {0, 1},
        Kind.MONOMIAL_QUADRATIC: {2},
        Kind.QUADRATIC: {0, 1, 2},
    }[kind]
    return degrees <= shape


def _problem_checks(report: PipelineReport, p: Problem, config: SolverConfig, clock: _Clock) -> None:
    start = time.perf_counter()
    for s in p.solutions:
        try:
            ok = check_solution(p, s)
        except UnsupportedFragment:
            ok = None
        report.checks.append((str(s), ok))
    clock.add("check", start)


def _dispatch_standard(report: PipelineReport, p: Problem, config: SolverConfig, clock: _Clock, inline_check: bool):
    queries = all_queries(p, inline_check)
    report.queries.extend(queries)
    if not config.has_solvers:
        return
    start = time.perf_counter()
    for q in queries:
        report.external[q.label] = external_solve(q, config)
    clock.add("external", start)


def _dispatch_uniteq(report: PipelineReport, p: Problem, config: SolverConfig, kinds, clock: _Clock):
    if uniteq_eligibility(p) is not None:
        return
    tasks = [emit_uniteq(p, k) for k in kinds]
    report.queries.extend(tasks)
    if not config.uniteq_solvers:
        return
    start = time.perf_counter()
    for task in tasks:
        report.templates.setdefault(task.kind, TemplateResult(task.kind)).verification["uniteq"] = external_solve(task, config)
    clock.add("external", start)


def _qe_and_postprocess(p: Problem, kind: Kind, clock: _Clock) -> TemplateResult:
    t = Template.of(kind, avoid=p.variables())
    r = TemplateResult(kind, template=t)
    start = time.perf_counter()
    r.constraint = eliminate(inline(p, t), p.variables())
    clock.add("qe", start)
    start = time.perf_counter()
    try:
        r.solved = to_solved_form(r.constraint.formulas(), t.coefficients)
    except NoSolvedForm as exc:
        r.error = str(exc)
        clock.add("postprocess", start)
        return r
    clock.add("postprocess", start)
    start = time.perf_counter()
    r.candidates = [instantiate(t, d) for d in r.solved]
    r.checks = [check_solution(p, c) for c in r.candidates]
    clock.add("check", start)
    return r


def _select_kinds(kinds) -> tuple:
    return tuple(SEARCH_ORDER) if kinds is None else tuple(k for k in SEARCH_ORDER if k in set(kinds))


def _unsupported(report: PipelineReport, p: Problem, config, kinds, clock, inline_check) -> PipelineReport:
    """Emission-only run: queries are produced (and dispatched), nothing is solved internally."""
    _problem_checks(report, p, config, clock)
    _dispatch_standard(report, p, config, clock, inline_check)
    for kind in kinds:
        r = report.templates.setdefault(kind, TemplateResult(kind))
        for variant in Variant:
            q = emit_template_verification(p, kind, variant)
            report.queries.append(q)
            if config.has_solvers:
                start = time.perf_counter()
                r.verification[q.label] = external_solve(q, config)
                clock.add("external", start)
    _settle_statuses(report, p)
    return report


def run_lazy(
    p: Problem,
    config: Optional[SolverConfig] = None,
    kinds=None,
    all_templates: bool = False,
    inline_check: bool = False,
) -> PipelineReport:
    """Solve each template by QE, then try to show the first solved form is complete.

    Stops at the smallest template with a nonempty solved form unless
    ``all_templates``.  Problems outside the equational fragment get an
    emission-only report.
    """
    config = config or SolverConfig()
    kinds = _select_kinds(kinds)
    report = PipelineReport(p.name, Mode.LAZY)
    clock = _Clock(report.timings)
    frag = classify_fragment(p)
    if not frag.equational:
        report.unsupported = frag.reason
        return _unsupported(report, p, config, kinds, clock, inline_check)
    _problem_checks(report, p, config, clock)
    _dispatch_standard(report, p, config, clock, inline_check)
    for kind in kinds:
        r = _qe_and_postprocess(p, kind, clock)
        report.templates[kind] = r
        if r.solved is None or r.solved.is_bottom:
            continue
        q = emit_uniqueness(p, r.solved, r.template)
        report.queries.append(q)
        if config.has_solvers:
            start = time.perf_counter()
            r.verification["unique"] = external_solve(q, config)
            clock.add("external", start)
        verified = "unique" in r.verification and r.verification["unique"].status == "unsat"
        if report.solved_kind is None or (verified and not report.verified):
            report.solved_kind = kind
            report.verified = verified
        if not all_templates:
            break
    _dispatch_uniteq(report, p, config, kinds, clock)
    _settle_statuses(report, p)
    return report


def run_eager(
    p: Problem,
    config: Optional[SolverConfig] = None,
    kinds=None,
    all_templates: bool = False,
    inline_check: bool = False,
) -> PipelineReport:
    """Prove a template first, then solve inside it.

    Without configured solvers nothing can be proven, so the run degrades to
    lazy mode (``report.degraded``).
    """
    config = config or SolverConfig()
    if not config.has_solvers:
        report = run_lazy(p, config, kinds, all_templates, inline_check)
        report.degraded = True
        return report
    kinds = _select_kinds(kinds)
    report = PipelineReport(p.name, Mode.EAGER)
    clock = _Clock(report.timings)
    frag = classify_fragment(p)
    if not frag.equational:
        report.unsupported = frag.reason
        return _unsupported(report, p, config, kinds, clock, inline_check)
    _problem_checks(report, p, config, clock)
    _dispatch_standard(report, p, config, clock, inline_check)
    for kind in kinds:
        r = report.templates.setdefault(kind, TemplateResult(kind))
        proven = False
        for variant in Variant:
            q = emit_template_verification(p, kind, variant)
            report.queries.append(q)
            start = time.perf_counter()
            res = external_solve(q, config)
            clock.add("external", start)
            r.verification[q.label] = res
            if res.status == "unsat":
                proven = True
                break
        if not proven:
            continue
        solved = _qe_and_postprocess(p, kind, clock)
        solved.verification = r.verification
        report.templates[kind] = solved
        if solved.solved is not None and report.solved_kind is None:
            report.solved_kind = kind
            report.verified = True
        if not all_templates:
            break
    _dispatch_uniteq(report, p, config, kinds, clock)
    _settle_statuses(report, p)
    return report


def run(p: Problem, mode: Mode = Mode.LAZY, config: Optional[SolverConfig] = None, **kwargs) -> PipelineReport:
    fn = run_eager if mode is Mode.EAGER else run_lazy
    return fn(p, config, **kwargs)


def write_queries(report: PipelineReport, directory, legacy: bool = False) -> list:
    """Write every query of the report; returns the paths written."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for q in report.queries:
        path = directory / q.filename
        if isinstance(q, UnitEqTask):
            path.write_text(q.to_tptp())
            if legacy:
                legacy_path = path.with_suffix(".wm")
                legacy_path.write_text(q.to_legacy())
                paths.append(legacy_path)
        else:
            path.write_text(q.text)
        paths.append(path)
    return paths


# -- rendering -----------------------------------------------------------------------

TEMPLATE_HEADER = ["problem", *(k.label for k in TABLE_ORDER)]
SUMMARY_HEADER = ["problem", "mode", "prove", "check", "template", "solved form", "verified"]


def template_rows(reports, marks: bool = True) -> list:
    rows = []
    for rep in reports:
        cells = [rep.status(k).mark if marks else rep.status(k).value for k in TABLE_ORDER]
        rows.append([rep.problem, *cells])
    return rows


def summary_rows(reports, marks: bool = True) -> list:
    rows = []
    for rep in reports:
        def show(st):
            return st.mark if marks else st.value

        if rep.unsupported is not None:
            solved = f"unsupported: {rep.unsupported}"
            template = ""
        elif rep.solved_kind is None:
            errors = [r.error for r in rep.templates.values() if r.error]
            solved = "none" if not errors else "none (" + errors[0] + ")"
            template = ""
        else:
            solved = str(rep.solved)
            template = rep.solved_kind.cli_name
        mode = rep.mode.value + (" (degraded)" if rep.degraded else "")
        rows.append([rep.problem, mode, show(rep.prove_status()), show(rep.check_status()), template, solved, "yes" if rep.verified else "no"])
    return rows


def _text_table(header, rows) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows)
    return "\n".join(lines) + "\n"


def _csv_table(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def render_report(reports, fmt: str = "txt") -> dict:
    """Template-status and prove/check tables, keyed ``templates`` and ``summary``."""
    reports = list(reports)
    if fmt == "txt":
        return {
            "templates": _text_table(TEMPLATE_HEADER, template_rows(reports)),
            "summary": _text_table(SUMMARY_HEADER, summary_rows(reports)),
        }
    if fmt == "csv":
        return {
            "templates": _csv_table(TEMPLATE_HEADER, template_rows(reports, marks=False)),
            "summary": _csv_table(SUMMARY_HEADER, summary_rows(reports, marks=False)),
        }
    raise ValueError(f"unknown report format {fmt!r}")

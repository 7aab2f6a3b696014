"""Command line: ``feq solve`` and ``feq list``."""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import FeqError
from .problem import corpus_dir, corpus_problem, load_corpus, load_problem_file
from .runner import (
    DEFAULT_TIMEOUT,
    Mode,
    SolverConfig,
    parse_solver_spec,
    render_report,
    run,
    write_queries,
)
from .template import Kind

log = logging.getLogger("feq")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNSUPPORTED = 2


def load_target(target: str) -> list:
    """A ``.feq`` file, a directory of them, ``corpus``, or a bundled problem name."""
    path = Path(target)
    if target == "corpus":
        return load_corpus()
    if path.is_dir():
        return load_corpus(path)
    if path.is_file():
        return [load_problem_file(path)]
    return [corpus_problem(target)]


def build_config(args) -> SolverConfig:
    base = SolverConfig.from_file(args.config) if args.config else SolverConfig()
    solvers = list(base.solvers) + [parse_solver_spec(s) for s in args.solver]
    uniteq = list(base.uniteq_solvers) + [parse_solver_spec(s) for s in args.uniteq_solver]
    timeout = args.timeout if args.timeout is not None else base.timeout
    return SolverConfig(tuple(solvers), tuple(uniteq), timeout)


def _kinds(name: str):
    return None if name == "all" else [Kind.from_name(name)]


def cmd_solve(args) -> int:
    try:
        problems = load_target(args.target)
        config = build_config(args)
    except (FeqError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    mode = Mode(args.mode)
    kinds = _kinds(args.template)

    def one(p):
        log.info("solving %s", p.name)
        return run(p, mode, config, kinds=kinds, all_templates=args.all_templates, inline_check=args.inline_check)

    try:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(one, problems))
    except FeqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    if args.emit:
        for rep in reports:
            for path in write_queries(rep, args.emit, legacy=args.legacy_uniteq):
                log.info("wrote %s", path)

    tables = render_report(reports, args.report)
    print(tables["templates"])
    print(tables["summary"], end="")

    if args.report_dir:
        write_report_dir(reports, Path(args.report_dir))

    for rep in reports:
        for note in rep.conflicts:
            log.warning("%s: solver conflict: %s", rep.problem, note)
        for label, res in rep.external.items():
            if res.diagnostic:
                log.info("%s %s: %s", rep.problem, label, res.diagnostic)
        if rep.unsupported:
            log.warning("%s: unsupported fragment (%s); queries emitted only", rep.problem, rep.unsupported)
    if reports and all(rep.unsupported for rep in reports):
        return EXIT_UNSUPPORTED
    return EXIT_OK


def write_report_dir(reports, directory: Path) -> None:
    from .plotting import plot_template_status, plot_timings

    directory.mkdir(parents=True, exist_ok=True)
    for fmt in ("csv", "txt"):
        for name, text in render_report(reports, fmt).items():
            (directory / f"{name}.{fmt}").write_text(text)
    plot_template_status(reports, directory / "templates.png")
    plot_timings(reports, directory / "timings.png")


def cmd_list(args) -> int:
    for p in load_corpus():
        sols = "; ".join(str(s) for s in p.solutions)
        print(f"{p.name:6} {sols}")
    log.debug("corpus at %s", corpus_dir())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="feq", description="Solve functional equations with templates and quantifier elimination.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run the pipeline on a problem file, directory, 'corpus', or bundled name")
    solve.add_argument("target")
    solve.add_argument("--mode", choices=[m.value for m in Mode], default="lazy")
    solve.add_argument("--template", choices=["all", *(k.cli_name for k in Kind)], default="all")
    solve.add_argument("--emit", metavar="DIR", help="write SMT-LIB2 and TPTP queries here")
    solve.add_argument("--legacy-uniteq", action="store_true", help="also write the sectioned unit-equality format (.wm)")
    solve.add_argument("--solver", action="append", default=[], metavar="NAME=CMD", help="SMT-LIB2 solver command; {file} marks the query path")
    solve.add_argument("--uniteq-solver", action="append", default=[], metavar="NAME=CMD", help="TPTP prover command for unit-equality tasks")
    solve.add_argument("--config", help="key-value solver config file")
    solve.add_argument("--timeout", type=float, default=None, help=f"seconds per external query (default {DEFAULT_TIMEOUT:g})")
    solve.add_argument("--all-templates", action="store_true", help="do not stop at the first successful template")
    solve.add_argument("--inline-check", action="store_true", help="substitute the candidate for f in check queries")
    solve.add_argument("--report", choices=["txt", "csv"], default="txt")
    solve.add_argument("--report-dir", metavar="DIR", help="write CSV and text tables plus PNG figures here")
    solve.add_argument("-j", "--jobs", type=int, default=1, help="problems processed in parallel")
    solve.set_defaults(func=cmd_solve)

    lst = sub.add_parser("list", help="list the bundled problems")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except Exception as exc:  # last resort: report, do not trace back
        log.debug("internal error", exc_info=True)
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

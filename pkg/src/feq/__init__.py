"""Solve functional equations over the reals with polynomial templates and quantifier elimination."""

from .errors import FeqError, NoSolvedForm, NotUnitEquational, UnsupportedFragment
from .problem import Problem, SolutionCandidate, classify_fragment, corpus_problem, load_corpus
from .runner import SolverConfig, check_solution, run_eager, run_lazy
from .solved import SolvedForm, to_solved_form
from .template import Kind, Template, Variant

__version__ = "0.1.0"

__all__ = [
    "FeqError",
    "Kind",
    "NoSolvedForm",
    "NotUnitEquational",
    "Problem",
    "SolutionCandidate",
    "SolvedForm",
    "SolverConfig",
    "Template",
    "UnsupportedFragment",
    "Variant",
    "check_solution",
    "classify_fragment",
    "corpus_problem",
    "load_corpus",
    "run_eager",
    "run_lazy",
    "to_solved_form",
]

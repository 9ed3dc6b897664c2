"""Toolchain for dependently typed higher-order TPTP problems.

Pipeline: parse (syntax) -> shallow skeleton check (shallow) -> deep check
with proof obligations (deep) -> erasure to plain HOL (erasure) -> external
prover (prover).  The cli module ties these together.
"""

from .core import (
    Axiom,
    BaseApp,
    BoolType,
    ConstDecl,
    Context,
    Pi,
    Theory,
    TypeDecl,
    alpha_equal,
    beta_eta_normalize,
    term_size,
)
from .deep import CheckReport, DeepChecker, Obligation, check_problem, export_obligations
from .diagnostics import Diagnostic, Span
from .erasure import ErasedProblem, erase_problem, erase_type
from .printer import format_term, format_type, print_problem, print_th0
from .prover import ProverConfig, ProverResult, SzsVerdict, run_prover
from .shallow import check_shallow, skeletonize
from .syntax import Problem, parse_file, parse_problem

__all__ = [
    "Axiom", "BaseApp", "BoolType", "ConstDecl", "Context", "Pi", "Theory",
    "TypeDecl", "alpha_equal", "beta_eta_normalize", "term_size",
    "CheckReport", "DeepChecker", "Obligation", "check_problem",
    "export_obligations", "Diagnostic", "Span",
    "ErasedProblem", "erase_problem", "erase_type",
    "format_term", "format_type", "print_problem", "print_th0",
    "ProverConfig", "ProverResult", "SzsVerdict", "run_prover",
    "check_shallow", "skeletonize", "Problem", "parse_file", "parse_problem",
]

__version__ = "0.1.0"

"""Refined Jensen operator inequalities and Young-type bounds, checked numerically."""

from .errors import (ConvergenceError, DomainError, ParseError, SpectrumError,
                     UnknownIdentifierError, ValidationError)
from .expr import differentiate, evaluate, parse, to_text
from .harness import RandomSpec, SuiteReport, run_suite
from .jensen import (JensenReport, jensen_multi, jensen_operator, jensen_scalar,
                     jensen_weighted, sin_example_scan)
from .opyoung import SandwichSpec, operator_geometric_mean, operator_young_check
from .scalar_fn import FunctionModel, Interval, builtin, concavifier, convexifier, make_model
from .young import MeanContext, compare_bound_families, young_refined, young_report

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DomainError", "ParseError", "SpectrumError",
    "UnknownIdentifierError", "ValidationError",
    "parse", "evaluate", "differentiate", "to_text",
    "FunctionModel", "Interval", "builtin", "make_model", "convexifier", "concavifier",
    "JensenReport", "jensen_operator", "jensen_multi", "jensen_weighted", "jensen_scalar",
    "sin_example_scan",
    "MeanContext", "young_refined", "young_report", "compare_bound_families",
    "SandwichSpec", "operator_geometric_mean", "operator_young_check",
    "RandomSpec", "SuiteReport", "run_suite",
]

"""Explicit-state model checking of ATLE formulas over epistemic process calculus models."""
from .checker import Checker, Verdict
from .errors import (EPCError, EPCSyntaxError, FormulaError, LimitExceeded,
                     StrategyLimitExceeded, UnfoldLimitExceeded, ValidationError)
from .parser import parse_formula, parse_label, parse_model
from .semantics import ExplorationLimits, StateSpace, explore

__all__ = [
    "Checker", "Verdict", "EPCError", "EPCSyntaxError", "FormulaError", "LimitExceeded",
    "StrategyLimitExceeded", "UnfoldLimitExceeded", "ValidationError", "parse_formula",
    "parse_label", "parse_model", "ExplorationLimits", "StateSpace", "explore",
]
__version__ = "0.1.0"

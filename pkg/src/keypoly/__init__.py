"""Exact key-polynomial chains for rank-1 valuations on K[x].

Construct and analyze chains of key polynomials against a target
valuation: standard expansions, truncation valuations, Newton polygons,
graded initial forms, augmentation steps, derivative value formulas,
(delta, epsilon) characters and limit-key-polynomial candidates.
"""

from .augment import AugmentReport, RunBudgets, RunStatus, augment_step, detect_defect, refine_alpha_one, run
from .chain import KeyChain, determines_side, newton_polygon, standard_expansion, truncation_value
from .graded import GradedElement, initial_form, integral_relation_lift, support_set
from .oracle import ChainOracle, EisensteinRootOracle, ScriptedLimitOracle, SeriesOracle, axioms_selftest
from .poly import Poly, euclid_div, evaluate, hasse_derivative
from .scalars.fields import (
    QWithPAdic,
    RationalFunctionField,
    TwoVariableField,
    field_from_json,
)
from .scalars.values import INF, Value, group_index

__all__ = [
    "AugmentReport",
    "ChainOracle",
    "EisensteinRootOracle",
    "GradedElement",
    "INF",
    "KeyChain",
    "Poly",
    "QWithPAdic",
    "RationalFunctionField",
    "RunBudgets",
    "RunStatus",
    "ScriptedLimitOracle",
    "SeriesOracle",
    "TwoVariableField",
    "Value",
    "augment_step",
    "axioms_selftest",
    "detect_defect",
    "determines_side",
    "euclid_div",
    "evaluate",
    "field_from_json",
    "group_index",
    "hasse_derivative",
    "initial_form",
    "integral_relation_lift",
    "newton_polygon",
    "refine_alpha_one",
    "run",
    "standard_expansion",
    "support_set",
    "truncation_value",
]

__version__ = "0.1.0"

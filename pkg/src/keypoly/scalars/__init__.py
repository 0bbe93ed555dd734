"""Exact scalars: value-group elements, base fields, residue fields, factorization."""

from .fields import QWithPAdic, RationalFunctionField, TwoVariableField, field_from_json
from .values import INF, Value, ValueLattice, group_index

__all__ = [
    "INF",
    "QWithPAdic",
    "RationalFunctionField",
    "TwoVariableField",
    "Value",
    "ValueLattice",
    "field_from_json",
    "group_index",
]

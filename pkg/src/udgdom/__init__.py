"""Approximate minimum (independent) dominating sets in unit disk graphs."""

from udgdom.core import (
    BudgetError,
    Corona,
    Graph,
    InputError,
    InvariantError,
    ParseError,
    PointInstance,
    Solution,
    StructureError,
    UDGError,
    hop_distance_within,
    is_dominating,
    is_independent,
)

__all__ = [
    "BudgetError",
    "Corona",
    "Graph",
    "InputError",
    "InvariantError",
    "ParseError",
    "PointInstance",
    "Solution",
    "StructureError",
    "UDGError",
    "hop_distance_within",
    "is_dominating",
    "is_independent",
]

__version__ = "0.1.0"

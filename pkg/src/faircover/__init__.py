"""Exact solvers for colour-budgeted vertex cover and feedback vertex set."""

from .graph import (
    ColourBudget,
    ColouredGraph,
    InputError,
    ParseError,
    SolveOutcome,
    parse_instance,
    serialize_instance,
)

__all__ = [
    "ColourBudget",
    "ColouredGraph",
    "InputError",
    "ParseError",
    "SolveOutcome",
    "parse_instance",
    "serialize_instance",
]

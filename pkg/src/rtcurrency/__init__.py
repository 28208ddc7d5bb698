"""Currencies for resource theories: cost, yield, balance and fairness over specifications."""

from .core import (
    AbstractSpace,
    CheckReport,
    FiniteTheory,
    IndeterminateError,
    Monotone,
    QuantumSpace,
    Spec,
    Theory,
    Transformation,
    Truth,
    UnsupportedRepresentation,
    is_complete_family,
    is_monotone,
    lift,
    load_theory,
    preorder_matrix,
    reaches,
)
from .currency import (
    UNAFFORDABLE,
    BalanceQuery,
    Currency,
    DomainError,
    PathologyReport,
    Thresholds,
    load_currency,
    random_theory,
    synthesize_currency,
)

__version__ = "0.1.0"

__all__ = [
    "AbstractSpace",
    "BalanceQuery",
    "CheckReport",
    "Currency",
    "DomainError",
    "FiniteTheory",
    "IndeterminateError",
    "Monotone",
    "PathologyReport",
    "QuantumSpace",
    "Spec",
    "Theory",
    "Thresholds",
    "Transformation",
    "Truth",
    "UNAFFORDABLE",
    "UnsupportedRepresentation",
    "is_complete_family",
    "is_monotone",
    "lift",
    "load_currency",
    "load_theory",
    "preorder_matrix",
    "random_theory",
    "reaches",
    "synthesize_currency",
]

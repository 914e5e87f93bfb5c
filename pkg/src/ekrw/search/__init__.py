"""Exact search for maximum intersecting families and theorem checks."""
from .engine import (
    ConstraintSet,
    SearchOutcome,
    best_seed,
    canonical_catalogue,
    default_budget,
    enumerate_maximum,
    max_family,
    name_family,
)
from .kernel import available_backends, default_backend

__all__ = [
    "ConstraintSet",
    "SearchOutcome",
    "available_backends",
    "best_seed",
    "canonical_catalogue",
    "default_backend",
    "default_budget",
    "enumerate_maximum",
    "max_family",
    "name_family",
]

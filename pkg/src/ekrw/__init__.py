"""Intersecting uniform families: constructions, bounds, shifting and exact search."""
from .family import (
    FamilyFormatError,
    SetFamily,
    are_isomorphic,
    degree,
    embeds_into,
    family_from_json,
    is_intersecting,
    is_trivial,
    max_degree,
)

__version__ = "0.1.0"

__all__ = [
    "FamilyFormatError",
    "SetFamily",
    "are_isomorphic",
    "degree",
    "embeds_into",
    "family_from_json",
    "is_intersecting",
    "is_trivial",
    "max_degree",
]

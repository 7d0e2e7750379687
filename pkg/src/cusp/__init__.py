"""Exact computations with abstract Cuntz semigroups."""

from .kinds import Config, Decision, Report, StructuralError, Tri, UndecidableError

__all__ = [
    "Config",
    "Decision",
    "Report",
    "StructuralError",
    "Tri",
    "UndecidableError",
]

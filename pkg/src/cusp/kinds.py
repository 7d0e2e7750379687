"""Shared result types, configuration, and error classes."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class StructuralError(ValueError):
    """Malformed input: non-total table, unknown label, incompatible carriers."""


class UndecidableError(ValueError):
    """A query landed outside the decidable algebra of an oracle or form."""


class BudgetError(RuntimeError):
    """An enumeration exceeded its configured cap."""


class Tri(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __bool__(self) -> bool:
        raise TypeError("Tri is three-valued; compare against Tri members explicitly")


@dataclass(frozen=True)
class Decision:
    """Three-valued answer with an optional witness and budget accounting.

    False answers always carry a witness.  Unknown answers carry the budget
    spent and the (n, m) frontier reached by the search.
    """

    value: Tri
    witness: Any = None
    budget_spent: int = 0
    frontier: tuple[int, int] | None = None

    @property
    def is_true(self) -> bool:
        return self.value is Tri.TRUE

    @property
    def is_false(self) -> bool:
        return self.value is Tri.FALSE

    @property
    def is_unknown(self) -> bool:
        return self.value is Tri.UNKNOWN

    def to_json(self) -> dict:
        out: dict[str, Any] = {"value": self.value.value, "budget_spent": self.budget_spent}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.frontier is not None:
            out["frontier"] = list(self.frontier)
        return out


def true_decision(budget: int = 0) -> Decision:
    return Decision(Tri.TRUE, budget_spent=budget)


def false_decision(witness: Any, budget: int = 0) -> Decision:
    return Decision(Tri.FALSE, witness=witness, budget_spent=budget)


def unknown_decision(budget: int, frontier: tuple[int, int]) -> Decision:
    return Decision(Tri.UNKNOWN, budget_spent=budget, frontier=frontier)


@dataclass(frozen=True)
class Report:
    """Outcome of an axiom check: pass, or the failing law plus witness elements."""

    passed: bool
    law: str | None = None
    witness: tuple | None = None

    @staticmethod
    def ok() -> "Report":
        return Report(True)

    @staticmethod
    def fail(law: str, witness: tuple) -> "Report":
        return Report(False, law, witness)

    def to_json(self) -> dict:
        if self.passed:
            return {"passed": True}
        return {"passed": False, "law": self.law, "witness": list(self.witness or ())}


@dataclass(frozen=True)
class Config:
    """Evaluation knobs; caps are configuration, never hard-coded constants."""

    budget: int = 200
    summand_cap: int = 16
    hom_cap: int = 10_000_000
    seed: int = 0


DEFAULT_CONFIG = Config()

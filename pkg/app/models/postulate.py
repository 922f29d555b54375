from enum import Enum
from typing import List

from pydantic import BaseModel, Field, computed_field

from app.core.errors import UnknownPrincipleError
from app.models.qbaf import Qbaf
from app.models.semantics import SemanticsSpec


class Principle(str, Enum):
    ANONYMITY = "anonymity"
    INDEPENDENCE = "independence"
    DIRECTIONALITY = "directionality"
    EQUIVALENCE = "equivalence"
    STABILITY = "stability"
    NEUTRALITY = "neutrality"
    MONOTONICITY = "monotonicity"
    REINFORCEMENT = "reinforcement"
    WEAKENING = "weakening"
    STRENGTHENING = "strengthening"
    DUALITY = "duality"
    OPEN_MINDEDNESS = "open_mindedness"

    @property
    def abbreviation(self) -> str:
        return _ABBREVIATIONS[self]

    @classmethod
    def parse(cls, name: "str | Principle") -> "Principle":
        if isinstance(name, Principle):
            return name
        key = name.strip().lower().replace("-", "_")
        for principle in cls:
            if key in (principle.value, principle.abbreviation.lower()):
                return principle
        raise UnknownPrincipleError(f"unknown principle '{name}'")


_ABBREVIATIONS = {
    Principle.ANONYMITY: "An",
    Principle.INDEPENDENCE: "In",
    Principle.DIRECTIONALITY: "Di",
    Principle.EQUIVALENCE: "Eq",
    Principle.STABILITY: "Sb",
    Principle.NEUTRALITY: "Ne",
    Principle.MONOTONICITY: "Mo",
    Principle.REINFORCEMENT: "Re",
    Principle.WEAKENING: "We",
    Principle.STRENGTHENING: "St",
    Principle.DUALITY: "Du",
    Principle.OPEN_MINDEDNESS: "Op",
}


class Violation(BaseModel):
    """A self-contained counterexample: re-checking ``framework`` fails the same principle."""

    framework: Qbaf
    arguments: List[str]
    values: List[float]
    detail: str


class PostulateReport(BaseModel):
    principle: Principle
    semantics: SemanticsSpec
    trials: int = Field(..., ge=0)
    violation_count: int = Field(0, ge=0)
    violations: List[Violation] = Field(default_factory=list, description="First witnesses found, capped")

    @computed_field
    @property
    def passed(self) -> bool:
        return self.violation_count == 0

from typing import List

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.models.qbaf import Argument, Qbaf


class ArgumentEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., min_length=1)
    tau: float = Field(..., ge=0.0, le=1.0, allow_inf_nan=False, description="Initial strength in [0,1]")

    @field_validator("tau", mode="before")
    @classmethod
    def _json_number(cls, value: object) -> object:
        # Strings and booleans would otherwise be coerced.
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError("tau must be a number")
        return value


class QbafDocument(BaseModel):
    """On-disk JSON form of a framework. Unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid")

    arguments: List[ArgumentEntry]
    attacks: List[tuple[str, str]]
    supports: List[tuple[str, str]]

    def to_qbaf(self) -> Qbaf:
        return Qbaf(
            arguments=tuple(Argument(id=a.id, tau=a.tau) for a in self.arguments),
            attacks=tuple(self.attacks),
            supports=tuple(self.supports),
        )

    @classmethod
    def from_qbaf(cls, q: Qbaf) -> "QbafDocument":
        return cls(
            arguments=[ArgumentEntry(id=a.id, tau=a.tau) for a in q.arguments],
            attacks=list(q.attacks),
            supports=list(q.supports),
        )

import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.models.qbaf import Qbaf
from app.models.solve import SolveResult


class GenKind(str, Enum):
    LADDER = "ladder"
    RANDOM_ACYCLIC = "random_acyclic"
    RANDOM_CYCLIC = "random_cyclic"
    CYCLE_DISJOINT = "cycle_disjoint"


class GenParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: GenKind
    n: Optional[int] = Field(None, ge=0, description="Supporters (ladder) or arguments (random kinds)")
    density: Optional[float] = Field(None, ge=0.0, le=1.0, description="Edges present over edges possible")
    att_sup_ratio: Optional[float] = Field(None, gt=0.0, description="Target |attacks| / |supports|")
    seed: int = Field(0, ge=0, lt=2**64)
    unit_strengths: bool = Field(False, description="Force every tau to 1 (ladders only)")


class ExperimentRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    framework_id: str
    semantics: str
    q: Optional[str] = None
    gamma: Optional[float] = None
    n: int = Field(..., ge=0)
    metric: str
    value: float
    runtime_ms: float = Field(0.0, ge=0.0)

    @field_validator("value")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("metric values must be finite")
        return value


class DivergenceWitness(BaseModel):
    framework: Qbaf
    discrete: SolveResult
    continuous: SolveResult

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings


class SolveMode(str, Enum):
    ACYCLIC_AUTO = "acyclic_auto"
    DISCRETE = "discrete"
    CONTINUOUS = "continuous"


class SolveStatus(str, Enum):
    CONVERGED = "converged"
    MAX_ITER_EXCEEDED = "max_iter_exceeded"
    OSCILLATION_DETECTED = "oscillation_detected"


class SolveConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: SolveMode = SolveMode.ACYCLIC_AUTO
    epsilon: float = Field(default_factory=lambda: settings.SOLVER_EPSILON, gt=0.0, description="Max-norm convergence threshold")
    max_iter: int = Field(default_factory=lambda: settings.SOLVER_MAX_ITER, ge=1)
    step_h: float = Field(default_factory=lambda: settings.SOLVER_STEP_H, gt=0.0, le=1.0, description="Euler step of the continuous mode")
    record_trajectory: bool = False
    oscillation_window: int = Field(default_factory=lambda: settings.OSCILLATION_WINDOW, ge=8)
    oscillation_tol: float = Field(default_factory=lambda: settings.OSCILLATION_TOL, gt=0.0)


class SolveResult(BaseModel):
    strengths: dict[str, float]
    status: SolveStatus
    iterations: int = Field(..., ge=0)
    residual: float = Field(..., ge=0.0, description="Final max-norm change")
    trajectory: Optional[List[dict[str, float]]] = None
    oscillation_period: Optional[int] = Field(None, ge=1)

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.CONVERGED

"""
Pydantic schemas for descent and solver configuration and results.
"""

from enum import Enum
from typing import TYPE_CHECKING, List, Optional

import numpy as np
import pandas as pd
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveFloat,
    PositiveInt,
    field_validator,
    model_validator,
)

from app.core.config import settings

if TYPE_CHECKING:
    from app.services.fourier.objective import ObjectiveContext


class OutcomeKind(str, Enum):
    """How a single descent run ended."""

    LOCAL_MIN = "LocalMin"
    CONVERGED = "Converged"
    ITERATION_CAP = "IterationCap"
    UNKNOWN = "Unknown"


class LocalMinFlag(str, Enum):
    """Verdict of the second-order test at a feasible critical point."""

    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"


class DescentConfig(BaseModel):
    """Parameters of one projected-gradient-descent run."""

    model_config = ConfigDict(frozen=True)

    eta: Optional[PositiveFloat] = Field(
        default=None,
        description="Step size; None uses min(w) / (n * sum(w))",
    )
    eps: PositiveFloat = Field(default_factory=lambda: settings.DESCENT_EPS)
    max_iters: PositiveInt = Field(default_factory=lambda: settings.DESCENT_MAX_ITERS)
    tau_bool: float = Field(default_factory=lambda: settings.TAU_BOOL, gt=0, lt=1)
    eps_zero: float = Field(default_factory=lambda: settings.EPS_ZERO, gt=0, lt=1e-3)
    line_search: bool = Field(default_factory=lambda: settings.LINE_SEARCH)
    max_shrinks: PositiveInt = Field(
        default_factory=lambda: settings.SADDLE_MAX_SHRINKS
    )
    zero_test_samples: PositiveInt = Field(
        default_factory=lambda: settings.ZERO_TEST_SAMPLES
    )
    trace: bool = False

    def step_size(self, ctx: "ObjectiveContext") -> float:
        """Configured eta or the theoretical step 1 / (n * m) scaled by weights."""
        if self.eta is not None:
            return self.eta
        return float(ctx.weights.min()) / (ctx.n * ctx.total_weight)


class EscapeCounts(BaseModel):
    """Saddle-escape invocations during one descent run."""

    dec_inner_saddle: int = 0
    use_hessian: int = 0


class DescentStep(BaseModel):
    """One accepted projected-gradient step."""

    iteration: int
    value_before: float
    value_after: float
    step: float
    grad_map_norm: float


class DescentOutcome(BaseModel):
    """Terminal point of a descent run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    point: np.ndarray
    kind: OutcomeKind
    value: float
    iters: int
    escapes: EscapeCounts = Field(default_factory=EscapeCounts)
    grad_map_norm: float = 0.0
    trace: Optional[List[DescentStep]] = None


class ModeKind(str, Enum):
    SAT = "sat"
    MAXSAT = "maxsat"
    THRESHOLD = "threshold"


class SolverMode(BaseModel):
    """Stopping goal of a solve: SAT, MaxSAT or a satisfied-clause threshold."""

    model_config = ConfigDict(frozen=True)

    kind: ModeKind = ModeKind.SAT
    target: Optional[PositiveInt] = None

    @model_validator(mode="after")
    def check_target(self) -> "SolverMode":
        if (self.kind == ModeKind.THRESHOLD) != (self.target is not None):
            raise ValueError("target is required by, and only by, threshold mode")
        return self

    @classmethod
    def parse(cls, text: str) -> "SolverMode":
        """Parse 'sat', 'maxsat' or 'threshold:<target>'."""
        name, _, target = text.strip().lower().partition(":")
        if name == ModeKind.THRESHOLD.value:
            if not target:
                raise ValueError("threshold mode needs a target, e.g. threshold:12")
            return cls(kind=ModeKind.THRESHOLD, target=int(target))
        if target:
            raise ValueError(f"mode '{name}' takes no target")
        return cls(kind=ModeKind(name))

    def __str__(self):
        if self.kind == ModeKind.THRESHOLD:
            return f"threshold:{self.target}"
        return self.kind.value


class WeightRule(str, Enum):
    UNIFORM = "uniform"
    CLAUSE_LENGTH = "length"
    EXPLICIT = "explicit"


class SolverConfig(BaseModel):
    """Restart budget, parallelism, seed and goal of a solve."""

    model_config = ConfigDict(frozen=True)

    restarts: Optional[PositiveInt] = Field(
        default_factory=lambda: settings.DEFAULT_RESTARTS
    )
    time_budget: Optional[PositiveFloat] = Field(
        default_factory=lambda: settings.DEFAULT_TIME_LIMIT
    )
    parallelism: PositiveInt = Field(default_factory=lambda: settings.DEFAULT_THREADS)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED, ge=0, lt=2**64)
    mode: SolverMode = Field(default_factory=SolverMode)
    weight_rule: WeightRule = WeightRule.UNIFORM
    rounding_samples: PositiveInt = Field(
        default_factory=lambda: settings.ROUNDING_SAMPLES
    )
    descent: DescentConfig = Field(default_factory=DescentConfig)

    @model_validator(mode="after")
    def check_budget(self) -> "SolverConfig":
        if self.restarts is None and self.time_budget is None:
            raise ValueError("Either restarts or time_budget must be set")
        return self


class SolveStatus(str, Enum):
    SAT = "Sat"
    UNKNOWN_BEST_FOUND = "UnknownBestFound"
    THRESHOLD_MET = "ThresholdMet"


class RestartStats(BaseModel):
    """Summary of one restart, as kept in SolveResult.restart_stats."""

    restart: int
    outcome: OutcomeKind
    value: float
    iters: int
    dec_inner_saddle: int
    use_hessian: int
    rounding: str
    satisfied: int
    satisfied_weight: float


class SolveResult(BaseModel):
    """Best Boolean witness found and run statistics."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: SolveStatus
    witness: np.ndarray
    satisfied: int
    satisfied_weight: float
    m: int
    total_weight: float
    objective: float
    restarts_used: int
    iterations_total: int
    wall_time: float
    restart_stats: List[RestartStats] = Field(default_factory=list)
    diagnostics: List[str] = Field(default_factory=list)

    @field_validator("witness")
    @classmethod
    def check_witness(cls, v):
        if not np.all(np.abs(v) == 1):
            raise ValueError("witness must be a +-1 vector")
        return v.astype(np.int8)

    def stats_frame(self) -> pd.DataFrame:
        """Per-restart statistics as a DataFrame (one row per restart)."""
        columns = list(RestartStats.model_fields)
        return pd.DataFrame(
            [s.model_dump() for s in self.restart_stats], columns=columns
        )

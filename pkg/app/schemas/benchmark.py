"""
Pydantic schemas for benchmark generation requests and generated instances.
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import settings
from app.models.formula import Formula


class GeneratorFamily(str, Enum):
    VERTEX_COVER = "vertex_cover"
    PARITY_LEARNING = "parity_learning"
    RANDOM_HYBRID = "random_hybrid"


class VertexCoverParams(BaseModel):
    """Random cubic graph with n_vertices vertices."""

    model_config = ConfigDict(frozen=True)

    n_vertices: int = Field(ge=4)

    @field_validator("n_vertices")
    @classmethod
    def check_vertices(cls, v):
        if v % 2:
            raise ValueError("a cubic graph needs an even number of vertices")
        if v > settings.VERTEX_COVER_MAX_VERTICES:
            raise ValueError(
                f"exact cover search supports at most "
                f"{settings.VERTEX_COVER_MAX_VERTICES} vertices"
            )
        return v


class ParityParams(BaseModel):
    """Noisy parity learning with N hidden bits, m = 2N samples."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    e: float = Field(default=0.25, ge=0, lt=0.5, description="noise rate")
    bernoulli_noise: bool = False

    @field_validator("n")
    @classmethod
    def check_n(cls, v):
        if v > settings.PARITY_MAX_VARIABLES:
            raise ValueError(f"n must be <= {settings.PARITY_MAX_VARIABLES}")
        return v


class RandomHybridParams(BaseModel):
    """rn 3-CNF clauses, sn XORs of length ln and one global CARD_LE(kn)."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=3)
    r: float = Field(default=1.0, ge=0)
    s: float = Field(default=0.2, ge=0)
    l: float = Field(default=0.1, gt=0, le=1)  # noqa: E741
    k: float = Field(default=0.5, ge=0, le=1)

    @field_validator("n")
    @classmethod
    def check_n(cls, v):
        if v > settings.HYBRID_MAX_VARIABLES:
            raise ValueError(f"n must be <= {settings.HYBRID_MAX_VARIABLES}")
        return v


GenParams = Union[VertexCoverParams, ParityParams, RandomHybridParams]

_PARAMS_BY_FAMILY = {
    GeneratorFamily.VERTEX_COVER: VertexCoverParams,
    GeneratorFamily.PARITY_LEARNING: ParityParams,
    GeneratorFamily.RANDOM_HYBRID: RandomHybridParams,
}


class GenSpec(BaseModel):
    """A generator family, its parameters and the seed."""

    model_config = ConfigDict(frozen=True)

    family: GeneratorFamily
    params: GenParams
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def check_params(self) -> "GenSpec":
        expected = _PARAMS_BY_FAMILY[self.family]
        if not isinstance(self.params, expected):
            raise ValueError(
                f"{self.family.value} expects {expected.__name__}, "
                f"got {type(self.params).__name__}"
            )
        return self


class GenMetadata(BaseModel):
    """
    Metadata block written as "c meta {json}" into generated files.

    `certificate` is a model in the signed-integer convention (-i means x_i
    True) that satisfies every clause, or, for parity learning, the hidden
    parity that meets the target.
    """

    family: GeneratorFamily
    parameters: Dict[str, Any]
    seed: int
    certificate: Optional[List[int]] = None
    target_satisfied: Optional[int] = None
    details: Dict[str, Any] = Field(default_factory=dict)


class GeneratedInstance(BaseModel):
    """A generated formula with its metadata."""

    formula: Formula
    metadata: GenMetadata

    @property
    def target_satisfied(self) -> Optional[int]:
        return self.metadata.target_satisfied

"""
Domain models for hybrid Boolean formulas.

Sign convention: in every numeric view of an assignment, -1 encodes True and
+1 encodes False.
"""
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, model_validator

TRUE = -1
FALSE = 1

BooleanAssignment = npt.NDArray[np.int8]
Assignment = npt.NDArray[np.float64]


class ClauseKind(str, Enum):
    """Constraint types a clause can take."""

    CNF = "cnf"
    XOR = "xor"
    CARD_GE = "card_ge"
    CARD_LE = "card_le"
    NAE = "nae"

    @property
    def is_cardinality(self) -> bool:
        return self in (ClauseKind.CARD_GE, ClauseKind.CARD_LE)


class Literal(BaseModel):
    """A variable or its negation."""

    model_config = ConfigDict(frozen=True)

    var: int = Field(ge=1, description="1-based variable index")
    negated: bool = False

    @classmethod
    def from_int(cls, value: int) -> "Literal":
        """Build a literal from a signed DIMACS integer."""
        if value == 0:
            raise ValueError("0 is not a literal")
        return cls(var=abs(value), negated=value < 0)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    def __invert__(self) -> "Literal":
        return Literal(var=self.var, negated=not self.negated)

    def __repr__(self):
        return f"<Literal({self.to_int()})>"


class Clause(BaseModel):
    """One hybrid constraint."""

    model_config = ConfigDict(frozen=True)

    kind: ClauseKind
    literals: Tuple[Literal, ...] = Field(min_length=1)
    threshold: Optional[int] = None
    weight: Optional[PositiveFloat] = None

    @model_validator(mode="after")
    def check_threshold(self) -> "Clause":
        if self.kind.is_cardinality and self.threshold is None:
            raise ValueError(f"{self.kind.value} clause requires a threshold")
        if not self.kind.is_cardinality and self.threshold is not None:
            raise ValueError(f"{self.kind.value} clause takes no threshold")
        return self

    @classmethod
    def of(
        cls,
        kind: ClauseKind,
        literals: Sequence[int],
        threshold: Optional[int] = None,
        weight: Optional[float] = None,
    ) -> "Clause":
        """Build a clause from signed integers."""
        return cls(
            kind=kind,
            literals=tuple(Literal.from_int(v) for v in literals),
            threshold=threshold,
            weight=weight,
        )

    @property
    def size(self) -> int:
        return len(self.literals)

    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(lit.var for lit in self.literals)

    def with_weight(self, weight: Optional[float]) -> "Clause":
        return self.model_copy(update={"weight": weight})

    def __repr__(self):
        lits = ",".join(str(lit.to_int()) for lit in self.literals)
        k = f"k={self.threshold}; " if self.threshold is not None else ""
        return f"<Clause({self.kind.value}: {k}{lits})>"


class ConstantClause(BaseModel):
    """A clause that normalized to a constant truth value."""

    model_config = ConfigDict(frozen=True)

    value: bool
    kind: ClauseKind
    weight: Optional[PositiveFloat] = None

    def __repr__(self):
        return f"<ConstantClause({self.value}, from={self.kind.value})>"


NormalizedClause = Union[Clause, ConstantClause]


class Formula(BaseModel):
    """A conjunction of hybrid clauses over variables 1..n."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    clauses: Tuple[Clause, ...] = Field(min_length=1)
    comments: Tuple[str, ...] = ()
    metadata: Optional[Dict[str, Any]] = None

    @model_validator(mode="after")
    def check_variable_range(self) -> "Formula":
        for index, clause in enumerate(self.clauses):
            for lit in clause.literals:
                if lit.var > self.n:
                    raise ValueError(
                        f"clause {index} uses variable {lit.var} > n={self.n}"
                    )
        return self

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def is_fully_weighted(self) -> bool:
        """Every clause carries an explicit weight."""
        return all(c.weight is not None for c in self.clauses)

    def __repr__(self):
        return f"<Formula(n={self.n}, m={self.m})>"


def as_boolean_assignment(values: Any, n: Optional[int] = None) -> BooleanAssignment:
    """Validate and convert a vector of +-1 entries."""
    array = np.asarray(values)
    if array.ndim != 1:
        raise ValueError("Boolean assignment must be a vector")
    if n is not None and array.shape[0] != n:
        raise ValueError(f"Boolean assignment has length {array.shape[0]}, need {n}")
    if not np.all((array == TRUE) | (array == FALSE)):
        raise ValueError("Boolean assignment entries must be -1 or +1")
    return array.astype(np.int8)

from abc import ABC, abstractmethod
from typing import List, Sequence

import numpy as np

from app.models.formula import Clause, Formula
from app.schemas.benchmark import (
    GeneratedInstance,
    GeneratorFamily,
    GenMetadata,
    GenSpec,
)


class BenchmarkGenerator(ABC):
    """Interface for seeded benchmark generators"""

    @property
    @abstractmethod
    def family(self) -> GeneratorFamily:
        """Family produced by the generator"""
        pass

    @abstractmethod
    def generate(self, spec: GenSpec) -> GeneratedInstance:
        """Build the instance described by spec; a pure function of spec"""
        pass

    @staticmethod
    def rng(spec: GenSpec) -> np.random.Generator:
        return np.random.default_rng(spec.seed)

    def instance(
        self,
        spec: GenSpec,
        n: int,
        clauses: Sequence[Clause],
        comments: List[str],
        **metadata,
    ) -> GeneratedInstance:
        meta = GenMetadata(
            family=self.family,
            parameters=spec.params.model_dump(),
            seed=spec.seed,
            **metadata,
        )
        formula = Formula(
            n=n,
            clauses=tuple(clauses),
            comments=tuple(comments),
            metadata=meta.model_dump(mode="json"),
        )
        return GeneratedInstance(formula=formula, metadata=meta)

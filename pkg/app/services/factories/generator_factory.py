from typing import Dict, Type

from app.core.logging import get_logger
from app.schemas.benchmark import (
    GeneratedInstance,
    GeneratorFamily,
    GenSpec,
    ParityParams,
    RandomHybridParams,
    VertexCoverParams,
)
from app.services.benchgen.base import BenchmarkGenerator
from app.services.benchgen.parity import ParityLearningGenerator
from app.services.benchgen.random_hybrid import RandomHybridGenerator
from app.services.benchgen.vertex_cover import VertexCoverGenerator

logger = get_logger(__name__)


class GeneratorFactory:
    """Factory to create benchmark generators."""

    _generators: Dict[GeneratorFamily, Type[BenchmarkGenerator]] = {
        GeneratorFamily.VERTEX_COVER: VertexCoverGenerator,
        GeneratorFamily.PARITY_LEARNING: ParityLearningGenerator,
        GeneratorFamily.RANDOM_HYBRID: RandomHybridGenerator,
    }

    @classmethod
    def create_generator(cls, family: GeneratorFamily) -> BenchmarkGenerator:
        """Creates the generator of a family."""
        if family not in cls._generators:
            raise ValueError(f"Generator family {family} not supported")

        generator_class = cls._generators[family]
        return generator_class()

    @classmethod
    def generate(cls, spec: GenSpec) -> GeneratedInstance:
        """Creates the family's generator and runs it on spec."""
        logger.debug("Generating instance", family=spec.family.value, seed=spec.seed)
        return cls.create_generator(spec.family).generate(spec)


def gen_vertex_cover(n_vertices: int, seed: int = 0) -> GeneratedInstance:
    return GeneratorFactory.generate(
        GenSpec(
            family=GeneratorFamily.VERTEX_COVER,
            params=VertexCoverParams(n_vertices=n_vertices),
            seed=seed,
        )
    )


def gen_parity_learning(
    n: int, e: float = 0.25, seed: int = 0, bernoulli_noise: bool = False
) -> GeneratedInstance:
    return GeneratorFactory.generate(
        GenSpec(
            family=GeneratorFamily.PARITY_LEARNING,
            params=ParityParams(n=n, e=e, bernoulli_noise=bernoulli_noise),
            seed=seed,
        )
    )


def gen_random_hybrid(
    n: int,
    r: float = 1.0,
    s: float = 0.2,
    l: float = 0.1,  # noqa: E741
    k: float = 0.5,
    seed: int = 0,
) -> GeneratedInstance:
    return GeneratorFactory.generate(
        GenSpec(
            family=GeneratorFamily.RANDOM_HYBRID,
            params=RandomHybridParams(n=n, r=r, s=s, l=l, k=k),
            seed=seed,
        )
    )

"""
Random hybrid instances: rn 3-CNF clauses, sn XOR clauses of length ln and
one global CARD_LE(kn) over all variables (counts rounded up).
"""

from math import ceil

import numpy as np

from app.core.logging import get_logger
from app.models.formula import Clause, ClauseKind
from app.schemas.benchmark import GeneratedInstance, GeneratorFamily, GenSpec
from app.services.benchgen.base import BenchmarkGenerator

logger = get_logger(__name__)


def scaled_count(ratio: float, n: int) -> int:
    """ceil(ratio * n), ignoring float noise below 1e-9."""
    return ceil(round(ratio * n, 9))


def random_literals(rng: np.random.Generator, n: int, size: int) -> list:
    variables = rng.choice(n, size=size, replace=False) + 1
    signs = rng.choice([-1, 1], size=size)
    return [int(v) for v in variables * signs]


class RandomHybridGenerator(BenchmarkGenerator):
    """Uniform random CNF/XOR/cardinality mixtures."""

    @property
    def family(self) -> GeneratorFamily:
        return GeneratorFamily.RANDOM_HYBRID

    def generate(self, spec: GenSpec) -> GeneratedInstance:
        params = spec.params
        n = params.n
        cnf_count = scaled_count(params.r, n)
        xor_count = scaled_count(params.s, n)
        xor_length = scaled_count(params.l, n)
        threshold = scaled_count(params.k, n)

        rng = self.rng(spec)
        clauses = [
            Clause.of(ClauseKind.CNF, random_literals(rng, n, 3))
            for _ in range(cnf_count)
        ]
        clauses.extend(
            Clause.of(ClauseKind.XOR, random_literals(rng, n, xor_length))
            for _ in range(xor_count)
        )
        clauses.append(
            Clause.of(ClauseKind.CARD_LE, list(range(1, n + 1)), threshold=threshold)
        )

        logger.info(
            "Random hybrid instance generated",
            n=n,
            cnf=cnf_count,
            xor=xor_count,
            xor_length=xor_length,
            threshold=threshold,
        )
        return self.instance(
            spec,
            n=n,
            clauses=clauses,
            comments=[
                f"random hybrid: n={n} cnf={cnf_count} xor={xor_count}x{xor_length} "
                f"card<={threshold}"
            ],
            details={
                "cnf": cnf_count,
                "xor": xor_count,
                "xor_length": xor_length,
                "threshold": threshold,
            },
        )

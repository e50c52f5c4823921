"""
Noisy parity learning as a system of XOR clauses.

A hidden subset of N bits labels m = 2N random non-zero samples with their
parity; a share e of the labels is flipped. Each sample becomes one XOR over
its support, negated when the observed label is even, so that the hidden
parity (bit 1 meaning True) violates exactly the flipped samples.
"""

from typing import List

import numpy as np

from app.core.logging import get_logger
from app.models.formula import Clause, ClauseKind
from app.schemas.benchmark import GeneratedInstance, GeneratorFamily, GenSpec
from app.services.benchgen.base import BenchmarkGenerator

logger = get_logger(__name__)


def nonzero_rows(rng: np.random.Generator, rows: int, n: int) -> np.ndarray:
    """Uniform random 0/1 rows, redrawing all-zero ones."""
    samples = rng.integers(0, 2, size=(rows, n))
    empty = ~samples.any(axis=1)
    while empty.any():
        samples[empty] = rng.integers(0, 2, size=(int(empty.sum()), n))
        empty = ~samples.any(axis=1)
    return samples


def noise_flips(
    rng: np.random.Generator, m: int, e: float, bernoulli: bool
) -> np.ndarray:
    """Exactly floor(e * m) flipped labels, or independent Bernoulli(e) flips."""
    if bernoulli:
        return rng.random(m) < e
    flips = np.zeros(m, dtype=bool)
    flips[rng.choice(m, size=int(np.floor(e * m)), replace=False)] = True
    return flips


def parity_clause(support: np.ndarray, label: int) -> Clause:
    literals: List[int] = [int(j) + 1 for j in np.nonzero(support)[0]]
    if label == 0:
        literals[0] = -literals[0]
    return Clause.of(ClauseKind.XOR, literals)


class ParityLearningGenerator(BenchmarkGenerator):
    """Parity learning with error; target = clauses the hidden parity keeps."""

    @property
    def family(self) -> GeneratorFamily:
        return GeneratorFamily.PARITY_LEARNING

    def generate(self, spec: GenSpec) -> GeneratedInstance:
        params = spec.params
        n, m = params.n, 2 * params.n
        rng = self.rng(spec)

        hidden = nonzero_rows(rng, 1, n)[0]
        samples = nonzero_rows(rng, m, n)
        labels = samples @ hidden % 2
        flips = noise_flips(rng, m, params.e, params.bernoulli_noise)
        observed = labels ^ flips

        clauses = [parity_clause(row, int(y)) for row, y in zip(samples, observed)]
        flipped = int(flips.sum())
        target = m - flipped
        certificate = [-(j + 1) if hidden[j] else j + 1 for j in range(n)]

        logger.info("Parity instance generated", n=n, m=m, flipped=flipped)
        return self.instance(
            spec,
            n=n,
            clauses=clauses,
            comments=[f"parity learning: N={n} m={m} e={params.e} target={target}"],
            certificate=certificate,
            target_satisfied=target,
            details={
                "hidden": [int(j) + 1 for j in np.nonzero(hidden)[0]],
                "flipped": [int(i) + 1 for i in np.nonzero(flips)[0]],
                "noise": "bernoulli" if params.bernoulli_noise else "exact",
            },
        )

"""
Weighted multilinear objective F(a) = sum_c w_c FE_c(a) over the cube [-1, 1]^n.

Clause values are kappa-weighted elementary symmetric polynomials (ESPs) of
the signed clause inputs, so evaluation is O(k^2) per clause of length k.
Clauses are grouped by length and evaluated as one array per group.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from app.core.exceptions import WeightRuleException
from app.core.logging import get_logger
from app.models.formula import ConstantClause, Formula, NormalizedClause
from app.services.formula.normalizer import normalize_clause
from app.services.fourier.esp import elementary_symmetric, esp_coeffs, leave_one_out
from app.services.fourier.spectrum import ClauseSpectrum, eval_clause, spectrum

logger = get_logger(__name__)


@dataclass(frozen=True)
class ClauseBlock:
    """All spectra of one clause length, stacked."""

    size: int
    index: np.ndarray
    signs: np.ndarray
    kappa: np.ndarray
    weights: np.ndarray
    members: np.ndarray

    def signed_inputs(self, a: np.ndarray) -> np.ndarray:
        return self.signs * a[..., self.index]


@dataclass(frozen=True)
class ObjectiveContext:
    """
    Everything needed to evaluate F, its gradient and restricted Hessians.

    `weights` and `normalized` follow formula clause order; `spectra` holds the
    non-constant clauses and `spectrum_clause` maps each one back to its
    clause position. Constant clauses add -w (ConstTrue) or +w (ConstFalse)
    to the constant term.
    """

    n: int
    weights: np.ndarray
    normalized: Tuple[NormalizedClause, ...]
    spectra: Tuple[ClauseSpectrum, ...]
    spectrum_clause: np.ndarray
    constant: float
    blocks: Tuple[ClauseBlock, ...] = field(repr=False)

    @classmethod
    def build(
        cls, formula: Formula, weights: Optional[Sequence[float]] = None
    ) -> "ObjectiveContext":
        """
        Normalize every clause and compute its spectrum.

        Args:
            formula: parsed formula
            weights: one positive weight per clause; defaults to the clause's
                own weight or 1

        Raises:
            WeightRuleException: wrong length or non-positive weight.
        """
        if weights is None:
            weights = [
                c.weight if c.weight is not None else 1.0 for c in formula.clauses
            ]
        w = np.asarray(weights, dtype=float)
        if w.shape != (formula.m,):
            raise WeightRuleException(
                f"Expected {formula.m} weights, got {w.size}", rule="explicit"
            )
        bad = np.nonzero(~(w > 0) | ~np.isfinite(w))[0]
        if bad.size:
            raise WeightRuleException(
                "Weights must be positive and finite", clause_index=int(bad[0])
            )
        w.setflags(write=False)

        normalized = tuple(normalize_clause(c, formula.n) for c in formula.clauses)
        spectra = []
        owners = []
        constant = 0.0
        for position, clause in enumerate(normalized):
            if isinstance(clause, ConstantClause):
                constant += -w[position] if clause.value else w[position]
                continue
            spectra.append(spectrum(clause, weight=w[position]))
            owners.append(position)

        context = cls(
            n=formula.n,
            weights=w,
            normalized=normalized,
            spectra=tuple(spectra),
            spectrum_clause=np.asarray(owners, dtype=np.intp),
            constant=float(constant),
            blocks=_stack_blocks(spectra),
        )
        logger.debug(
            "Objective built",
            n=formula.n,
            m=formula.m,
            blocks=len(context.blocks),
            constant=context.constant,
        )
        return context

    @property
    def m(self) -> int:
        return len(self.normalized)

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    @property
    def lower_bound(self) -> float:
        """F >= -W on the cube; equality exactly at satisfying points."""
        return -self.total_weight

    @property
    def const_false(self) -> Tuple[int, ...]:
        return tuple(
            i
            for i, c in enumerate(self.normalized)
            if isinstance(c, ConstantClause) and not c.value
        )

    def value(self, a: np.ndarray) -> np.ndarray:
        """F at one point (n,) or a batch (r, n)."""
        a = np.asarray(a, dtype=float)
        total = np.full(a.shape[:-1], self.constant)
        for block in self.blocks:
            esp = elementary_symmetric(block.signed_inputs(a))
            total = total + (esp * block.kappa).sum(axis=-1) @ block.weights
        return total

    def gradient(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        grad = np.zeros(self.n)
        for block in self.blocks:
            z = block.signed_inputs(a)
            esp = elementary_symmetric(z)
            rest = leave_one_out(z, esp)
            partial = np.einsum("cis,cs->ci", rest, block.kappa[:, 1:])
            contrib = block.weights[:, None] * block.signs * partial
            np.add.at(grad, block.index, contrib)
        return grad

    def hessian(self, a: np.ndarray, J: Sequence[int]) -> np.ndarray:
        """
        Second derivatives restricted to the 0-based coordinates J.

        H_ij = sum_c w_c sigma_i sigma_j sum_{s>=2} kappa_s e_{s-2}(z without
        i and j). F is multilinear so the diagonal is 0.
        """
        a = np.asarray(a, dtype=float)
        J = [int(j) for j in J]
        position: Dict[int, int] = {j: p for p, j in enumerate(J)}
        H = np.zeros((len(J), len(J)))
        if len(J) < 2:
            return H

        wanted = np.asarray(J, dtype=np.intp)
        for block in self.blocks:
            if block.size < 2:
                continue
            member = np.isin(block.index, wanted)
            for c in np.nonzero(member.sum(axis=1) >= 2)[0]:
                z = block.signs[c] * a[block.index[c]]
                pairs = np.array(list(combinations(np.nonzero(member[c])[0], 2)))
                zeroed = np.repeat(z[None, :], len(pairs), axis=0)
                rows = np.arange(len(pairs))
                zeroed[rows, pairs[:, 0]] = 0.0
                zeroed[rows, pairs[:, 1]] = 0.0
                esp = elementary_symmetric(zeroed)[:, : block.size - 1]
                values = (
                    block.weights[c]
                    * block.signs[c, pairs[:, 0]]
                    * block.signs[c, pairs[:, 1]]
                    * (esp @ block.kappa[c, 2:])
                )
                p = [position[j] for j in block.index[c, pairs[:, 0]]]
                q = [position[j] for j in block.index[c, pairs[:, 1]]]
                np.add.at(H, (p, q), values)
                np.add.at(H, (q, p), values)
        return H


def _stack_blocks(spectra: Sequence[ClauseSpectrum]) -> Tuple[ClauseBlock, ...]:
    by_size: Dict[int, list] = {}
    for i, s in enumerate(spectra):
        by_size.setdefault(s.size, []).append(i)

    blocks = []
    for size in sorted(by_size):
        members = by_size[size]
        blocks.append(
            ClauseBlock(
                size=size,
                index=np.stack([spectra[i].index for i in members]),
                signs=np.stack([spectra[i].signs for i in members]),
                kappa=np.stack([spectra[i].kappa for i in members]),
                weights=np.array([spectra[i].weight for i in members]),
                members=np.asarray(members, dtype=np.intp),
            )
        )
    return tuple(blocks)


def eval_objective(ctx: ObjectiveContext, a: np.ndarray) -> float:
    return float(ctx.value(a))


def gradient(ctx: ObjectiveContext, a: np.ndarray) -> np.ndarray:
    return ctx.gradient(a)


def hessian_restricted(
    ctx: ObjectiveContext, a: np.ndarray, J: Sequence[int]
) -> np.ndarray:
    return ctx.hessian(a, J)


__all__ = [
    "ClauseBlock",
    "ObjectiveContext",
    "elementary_symmetric",
    "esp_coeffs",
    "eval_clause",
    "eval_objective",
    "gradient",
    "hessian_restricted",
    "leave_one_out",
]

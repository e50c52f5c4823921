"""
Closed-form Fourier spectra of symmetric clauses.

A normalized clause with all literals taken positively is a symmetric Boolean
function, so its coefficient on a subset S only depends on |S|. A spectrum
therefore stores one coefficient per subset size (kappa) and moves literal
negations into a sign vector applied to the inputs.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb, exp, ldexp, log
from typing import Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import ClauseTooLargeException
from app.models.formula import ClauseKind, ConstantClause, NormalizedClause
from app.services.fourier.esp import elementary_symmetric
from app.utils.cache.manager import CacheKeyBuilder, get_spectrum_cache


@dataclass(frozen=True)
class ClauseSpectrum:
    """Size-indexed Fourier coefficients of one clause plus its literal signs."""

    kind: ClauseKind
    kappa: np.ndarray
    signs: np.ndarray
    variables: Tuple[int, ...]
    weight: float = 1.0

    @property
    def size(self) -> int:
        return len(self.variables)

    @property
    def index(self) -> np.ndarray:
        """0-based positions of the clause variables."""
        return np.asarray(self.variables, dtype=np.intp) - 1


def spectrum(
    clause: NormalizedClause, weight: Optional[float] = None
) -> ClauseSpectrum:
    """
    Spectrum of a normalized, non-constant clause.

    CNF is the at-least-1 cardinality constraint, XOR is the product of its
    literals, CARD_GE uses the theta-polynomial coefficient formula and NAE
    the even/odd subset-size formula.

    Raises:
        ValueError: constant or non-normalized (CARD_LE) clause.
        ClauseTooLargeException: clause longer than MAX_CLAUSE_SIZE.
    """
    if isinstance(clause, ConstantClause):
        raise ValueError("Constant clauses have no spectrum")
    if clause.kind == ClauseKind.CARD_LE:
        raise ValueError("CARD_LE clauses must be normalized to CARD_GE first")
    if clause.size > settings.MAX_CLAUSE_SIZE:
        raise ClauseTooLargeException(clause.size, settings.MAX_CLAUSE_SIZE)

    kappa = clause_kappa(clause.kind, clause.size, clause.threshold)
    signs = np.array([-1.0 if lit.negated else 1.0 for lit in clause.literals])
    signs.setflags(write=False)
    if weight is None:
        weight = clause.weight if clause.weight is not None else 1.0

    return ClauseSpectrum(
        kind=clause.kind,
        kappa=kappa,
        signs=signs,
        variables=clause.variables,
        weight=float(weight),
    )


def clause_kappa(
    kind: ClauseKind, size: int, threshold: Optional[int] = None
) -> np.ndarray:
    """Cached coefficient vector (kappa_0..kappa_size) of a positive clause."""
    if kind == ClauseKind.CNF:
        kind, threshold = ClauseKind.CARD_GE, 1
    key = CacheKeyBuilder.spectrum(kind.value, size, threshold)

    def compute() -> np.ndarray:
        if kind == ClauseKind.XOR:
            return xor_kappa(size)
        if kind == ClauseKind.NAE:
            return nae_kappa(size)
        return card_ge_kappa(size, threshold)

    return get_spectrum_cache().get_or_compute(key, compute)


def xor_kappa(size: int) -> np.ndarray:
    kappa = np.zeros(size + 1)
    kappa[size] = 1.0
    return kappa


def nae_kappa(size: int) -> np.ndarray:
    kappa = np.zeros(size + 1)
    kappa[2::2] = ldexp(1.0, 2 - size)
    kappa[0] = ldexp(1.0, 2 - size) - 1.0
    return kappa


def card_ge_kappa(size: int, threshold: int) -> np.ndarray:
    """
    Coefficients of "at least `threshold` of `size` inputs are True".

    kappa_0 = 1 - sum_{i>=k} C(n,i) / 2^(n-1); for s >= 1 kappa_s is
    C(n-1,k-1) * [theta^(s-1)] (1+theta)^(n-k) (1-theta)^(k-1)
    divided by C(n-1,s-1) 2^(n-1). The theta coefficients are exact integers;
    the scaling is exact up to EXACT_SPECTRUM_LIMIT and in log space beyond.
    """
    n, k = size, threshold
    if not 1 <= k <= n:
        raise ValueError(f"threshold {k} outside [1, {n}]")

    theta = theta_coefficients(n - k, k - 1)
    kappa = np.empty(n + 1)

    tail = sum(comb(n, i) for i in range(k, n + 1))
    kappa[0] = float(1 - Fraction(tail, 2 ** (n - 1)))

    lead = comb(n - 1, k - 1)
    if n <= settings.EXACT_SPECTRUM_LIMIT:
        scale = 2 ** (n - 1)
        for s in range(1, n + 1):
            denominator = comb(n - 1, s - 1) * scale
            kappa[s] = float(Fraction(lead * theta[s - 1], denominator))
    else:
        log_lead = log(lead) - (n - 1) * log(2.0)
        for s in range(1, n + 1):
            c = theta[s - 1]
            if c == 0:
                kappa[s] = 0.0
                continue
            magnitude = exp(log_lead + log(abs(c)) - log(comb(n - 1, s - 1)))
            kappa[s] = magnitude if c > 0 else -magnitude
    return kappa


def theta_coefficients(plus: int, minus: int) -> list:
    """Exact integer coefficients of (1+theta)^plus (1-theta)^minus."""
    coeffs = np.array(
        [(-1) ** i * comb(minus, i) for i in range(minus + 1)], dtype=object
    )
    for _ in range(plus):
        shifted = np.empty(len(coeffs) + 1, dtype=object)
        shifted[0] = 0
        shifted[1:] = coeffs
        shifted[:-1] += coeffs
        coeffs = shifted
    return [int(c) for c in coeffs]


def eval_clause(s: ClauseSpectrum, a: np.ndarray) -> float:
    """Unweighted FE_c(a): kappa dotted with the ESP values of the signed inputs."""
    z = s.signs * np.asarray(a, dtype=float)[s.index]
    return float(np.dot(s.kappa, elementary_symmetric(z)))

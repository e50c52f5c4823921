"""
Brute-force references for small instances: definition-based spectra,
exhaustive (Max)SAT, finite-difference derivatives and exact rounding
expectations. Every routine enforces a hard size cap.
"""

from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import OracleLimitException
from app.models.formula import (
    TRUE,
    BooleanAssignment,
    ConstantClause,
    Formula,
    NormalizedClause,
)
from app.services.formula.semantics import clause_truth
from app.services.fourier.objective import ObjectiveContext
from app.services.solver import round_randomized, satisfied_matrix


@dataclass(frozen=True)
class FullSpectrum:
    """Fourier coefficient of every subset of a clause's variables."""

    variables: Tuple[int, ...]
    coefficients: Dict[FrozenSet[int], float]

    def by_size(self) -> Dict[int, List[float]]:
        sizes: Dict[int, List[float]] = {}
        for subset, value in self.coefficients.items():
            sizes.setdefault(len(subset), []).append(value)
        return sizes

    def squared_norm(self) -> float:
        """Sum of squared coefficients; 1 for every +-1 valued clause."""
        return float(sum(v * v for v in self.coefficients.values()))


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform of a length-2^k vector."""
    out = np.array(values, dtype=float)
    size = out.shape[0]
    h = 1
    while h < size:
        blocks = out.reshape(-1, 2, h)
        out = np.stack(
            (blocks[:, 0] + blocks[:, 1], blocks[:, 0] - blocks[:, 1]), axis=1
        ).reshape(-1)
        h *= 2
    return out


def boolean_points(n: int, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    """Rows start..stop-1 of the cube; bit j of the row index set means x_j = -1."""
    stop = 2**n if stop is None else stop
    index = np.arange(start, stop, dtype=np.int64)
    bits = (index[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return (1 - 2 * bits).astype(np.int8)


def iter_boolean_points(
    n: int, chunk_bits: Optional[int] = None
) -> Iterator[np.ndarray]:
    chunk = 2 ** (chunk_bits or settings.ORACLE_CHUNK_BITS)
    total = 2**n
    for start in range(0, total, chunk):
        yield boolean_points(n, start, min(start + chunk, total))


def brute_force_spectrum(clause: NormalizedClause) -> FullSpectrum:
    """
    Coefficients E[f(x) prod_{i in S} x_i] over all 2^k Boolean points, with f
    the +-1 truth value (-1 when the clause holds).

    Raises:
        OracleLimitException: more than ORACLE_MAX_CLAUSE_SIZE variables.
    """
    if isinstance(clause, ConstantClause):
        return FullSpectrum((), {frozenset(): -1.0 if clause.value else 1.0})

    variables = tuple(sorted(set(clause.variables)))
    k = len(variables)
    if k > settings.ORACLE_MAX_CLAUSE_SIZE:
        raise OracleLimitException(
            "brute_force_spectrum", k, settings.ORACLE_MAX_CLAUSE_SIZE
        )

    points = np.ones((2**k, max(variables)), dtype=np.int8)
    points[:, [v - 1 for v in variables]] = boolean_points(k)
    f = np.where(clause_truth(clause, points), -1.0, 1.0)
    transformed = fwht(f) / 2**k

    coefficients = {}
    for mask, value in enumerate(transformed):
        subset = frozenset(variables[j] for j in range(k) if mask >> j & 1)
        coefficients[subset] = float(value)
    return FullSpectrum(variables, coefficients)


def brute_force_solve(
    formula: Formula, weights: Optional[np.ndarray] = None
) -> Tuple[int, BooleanAssignment]:
    """
    Exhaustive MaxSAT: (best satisfied count, first optimal assignment).

    With weights the optimum is by satisfied weight and the count of that
    assignment is returned.

    Raises:
        OracleLimitException: n > ORACLE_MAX_VARIABLES.
    """
    _check_variables("brute_force_solve", formula.n, settings.ORACLE_MAX_VARIABLES)
    w = np.ones(formula.m) if weights is None else np.asarray(weights, dtype=float)

    best_score = -np.inf
    best_count = 0
    best_point: Optional[np.ndarray] = None
    for points in iter_boolean_points(formula.n):
        mask = satisfied_matrix(formula, points)
        scores = mask @ w
        row = int(np.argmax(scores))
        if scores[row] > best_score:
            best_score = scores[row]
            best_count = int(mask[row].sum())
            best_point = points[row].copy()
    return best_count, best_point


def brute_force_min_objective(ctx: ObjectiveContext) -> float:
    """Global minimum of F over the box, attained at a vertex by multilinearity."""
    _check_variables(
        "brute_force_min_objective", ctx.n, settings.ORACLE_MAX_VARIABLES
    )
    return float(
        min(ctx.value(p.astype(float)).min() for p in iter_boolean_points(ctx.n))
    )


def fd_gradient(
    f: Callable[[np.ndarray], float], x: np.ndarray, h: float = 1e-5
) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        grad[i] = (f(x + e) - f(x - e)) / (2 * h)
    return grad


def fd_hessian(
    f: Callable[[np.ndarray], float], x: np.ndarray, h: float = 1e-4
) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n = x.size
    H = np.empty((n, n))
    center = f(x)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        H[i, i] = (f(x + ei) - 2 * center + f(x - ei)) / h**2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            H[i, j] = H[j, i] = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4 * h**2)
    return H


def rounding_expectation_exact(ctx: ObjectiveContext, a: np.ndarray) -> float:
    """
    Expected satisfied weight of the randomized rounding of a, enumerated
    over all 2^n outcomes. Equals (W - F(a)) / 2.

    Raises:
        OracleLimitException: n > ORACLE_MAX_ROUNDING_VARIABLES.
    """
    _check_variables(
        "rounding_expectation_exact", ctx.n, settings.ORACLE_MAX_ROUNDING_VARIABLES
    )
    a = np.asarray(a, dtype=float)
    points = boolean_points(ctx.n)
    p_true = (1.0 - a) / 2.0
    probability = np.where(points == TRUE, p_true, 1.0 - p_true).prod(axis=1)
    mask = np.column_stack([clause_truth(c, points) for c in ctx.normalized])
    return float(probability @ (mask @ ctx.weights))


def rounding_expectation_sampled(
    ctx: ObjectiveContext,
    a: np.ndarray,
    samples: int,
    rng: np.random.Generator,
) -> Tuple[float, float]:
    """Monte-Carlo (mean, standard error) of the rounded satisfied weight."""
    batch = round_randomized(a, rng, samples)
    mask = np.column_stack([clause_truth(c, batch) for c in ctx.normalized])
    scores = mask @ ctx.weights
    return float(scores.mean()), float(scores.std(ddof=1) / np.sqrt(samples))


def neighborhood_scan(
    ctx: ObjectiveContext, x: np.ndarray, step: float = 1e-3, tol: float = 1e-12
) -> bool:
    """
    True when no point x + step * d, d in {-1, 0, 1}^n (clipped to the box),
    has a lower objective than x by more than tol.

    Raises:
        OracleLimitException: n > ORACLE_MAX_ROUNDING_VARIABLES.
    """
    _check_variables(
        "neighborhood_scan", ctx.n, settings.ORACLE_MAX_ROUNDING_VARIABLES
    )
    x = np.asarray(x, dtype=float)
    directions = np.array(list(product((-1.0, 0.0, 1.0), repeat=ctx.n)))
    neighbours = np.clip(x + step * directions, -1.0, 1.0)
    return bool(np.all(ctx.value(neighbours) >= float(ctx.value(x)) - tol))


def _check_variables(operation: str, n: int, limit: int) -> None:
    if n > limit:
        raise OracleLimitException(operation, n, limit)

"""
Saddle-point escape for projected gradient descent on multilinear objectives.

Partially assigned polynomials are never expanded: a LocalPolynomial is an
evaluation closure over the ObjectiveContext with some coordinates pinned and
the remaining ones shifted by the closure argument.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence, Tuple

import numpy as np

from app.core.logging import get_logger
from app.schemas.solver import DescentConfig, LocalMinFlag
from app.services.fourier.objective import ObjectiveContext

logger = get_logger(__name__)


@dataclass(frozen=True)
class LocalPolynomial:
    """
    y -> F(anchor + y on the free coordinates) - offset.

    F is multilinear, so this is a multilinear polynomial in y. `fix_first`
    pins the first free coordinate to a given shift.
    """

    ctx: ObjectiveContext
    anchor: np.ndarray
    free: Tuple[int, ...]
    offset: float = 0.0

    @property
    def dims(self) -> int:
        return len(self.free)

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        point = np.broadcast_to(self.anchor, y.shape[:-1] + self.anchor.shape).copy()
        point[..., list(self.free)] += y
        return self.ctx.value(point) - self.offset

    def fix_first(self, value: float) -> "LocalPolynomial":
        anchor = self.anchor.copy()
        anchor[self.free[0]] += value
        return LocalPolynomial(self.ctx, anchor, self.free[1:], self.offset)

    def minus(self, constant: float) -> "LocalPolynomial":
        return LocalPolynomial(self.ctx, self.anchor, self.free, self.offset + constant)


def is_zero(
    f: LocalPolynomial,
    rng: np.random.Generator,
    eps_zero: float,
    samples: int = 3,
) -> bool:
    """
    Probabilistic identically-zero test.

    A non-zero multilinear polynomial vanishes on a measure-zero set, so a
    uniform sample from [-1, 1]^dims decides with probability 1. Majority vote
    over `samples` draws absorbs the float tolerance.
    """
    points = rng.uniform(-1.0, 1.0, size=(samples, f.dims))
    votes = np.abs(f(points)) <= eps_zero
    return 2 * int(votes.sum()) > samples


def neg_direction_saddle(
    f: LocalPolynomial,
    rng: np.random.Generator,
    eps_zero: float,
    samples: int = 3,
) -> Optional[np.ndarray]:
    """
    Direction v with f(delta * v) < 0 for all small delta > 0, given f(0) = 0.

    Splits f = h + y_p g on the leading free coordinate: a non-zero h is
    recursed into with v_p = 0; otherwise the sign of g(0) decides v_p, and
    g(0) = 0 recurses into g with v_p = 1. Returns None when every branch
    tests as identically zero.
    """
    v = np.zeros(f.dims)
    current = f
    for p in range(f.dims):
        h = current.fix_first(0.0)
        if not is_zero(h, rng, eps_zero, samples):
            current = h
            continue

        g = current.fix_first(1.0)
        g0 = float(g(np.zeros(g.dims)))
        if abs(g0) > eps_zero:
            v[p] = -np.sign(g0)
            return v
        if is_zero(g.minus(g0), rng, eps_zero, samples):
            return None
        v[p] = 1.0
        current = g
    return None


def shrinking_move(
    ctx: ObjectiveContext,
    x: np.ndarray,
    direction: np.ndarray,
    step: float,
    max_shrinks: int,
) -> Optional[np.ndarray]:
    """First x + step * direction (step halved up to max_shrinks times) in the
    box with a strictly lower objective, or None."""
    base = float(ctx.value(x))
    for _ in range(max_shrinks + 1):
        candidate = x + step * direction
        if np.all(np.abs(candidate) <= 1.0) and float(ctx.value(candidate)) < base:
            return candidate
        step *= 0.5
    return None


def dec_inner_saddle(
    ctx: ObjectiveContext,
    x: np.ndarray,
    eta: float,
    cfg: DescentConfig,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, bool]:
    """
    Escape an infeasible critical point.

    Builds F_N(y) = F_{I<-x_I}(y + x_free) - F(x) with I the boundary
    coordinates, takes its negative direction and moves along it.

    Returns:
        (new point, False) on a strict decrease, (x, True) when the caller
        should restart.
    """
    free = tuple(int(i) for i in np.nonzero(np.abs(x) < 1.0 - cfg.tau_bool)[0])
    if not free:
        return x, True

    f = LocalPolynomial(ctx, np.asarray(x, dtype=float), free, float(ctx.value(x)))
    v = neg_direction_saddle(f, rng, cfg.eps_zero, cfg.zero_test_samples)
    if v is None:
        logger.debug("No negative direction at inner saddle", free=len(free))
        return x, True

    direction = np.zeros(ctx.n)
    direction[list(free)] = v
    moved = shrinking_move(ctx, x, direction, eta, cfg.max_shrinks)
    if moved is None:
        logger.debug("Inner saddle step failed to decrease", free=len(free))
        return x, True
    return moved, False


def use_hessian(
    ctx: ObjectiveContext,
    x: np.ndarray,
    cfg: DescentConfig,
    eta: Optional[float] = None,
) -> Tuple[np.ndarray, LocalMinFlag]:
    """
    Second-order test at a feasible critical point.

    J holds coordinates with |dF_j| <= eps and I the boundary coordinates of
    J. A Hessian entry coupling I with J-I, or a pair in I whose entry has the
    wrong sign, yields a decreasing move (False). Past those checks every
    I, J-I coupling is zero, so a local minimum (True) is certified only when
    J lies entirely in I with non-zero entries on every pair, or entirely off
    the boundary, where feasibility makes F constant. Anything else,
    including a move that fails to decrease, is Unknown.
    """
    eta = cfg.step_size(ctx) if eta is None else eta
    grad = ctx.gradient(x)
    J = [int(j) for j in np.nonzero(np.abs(grad) <= cfg.eps)[0]]
    boundary = np.abs(x) >= 1.0 - cfg.tau_bool
    pinned = [p for p, j in enumerate(J) if boundary[j]]
    rest = [p for p, j in enumerate(J) if not boundary[j]]
    H = ctx.hessian(x, J)

    def move(pairs: Sequence[Tuple[int, float]]) -> Tuple[np.ndarray, LocalMinFlag]:
        direction = np.zeros(ctx.n)
        for p, value in pairs:
            direction[J[p]] = value
        moved = shrinking_move(ctx, x, direction, eta, cfg.max_shrinks)
        if moved is None:
            logger.debug("Hessian direction failed to decrease")
            return x, LocalMinFlag.UNKNOWN
        return moved, LocalMinFlag.FALSE

    for i in pinned:
        for j in rest:
            if abs(H[i, j]) > cfg.eps_zero:
                sign_i = np.sign(x[J[i]])
                return move([(i, -sign_i), (j, np.sign(sign_i * H[i, j]))])

    for i1, i2 in combinations(pinned, 2):
        if H[i1, i2] * x[J[i1]] * x[J[i2]] < -cfg.eps_zero:
            return move([(i1, -np.sign(x[J[i1]])), (i2, -np.sign(x[J[i2]]))])

    coupled = all(abs(H[p, q]) > cfg.eps_zero for p, q in combinations(pinned, 2))
    if not (pinned and rest) and coupled:
        return x, LocalMinFlag.TRUE

    logger.debug("Degenerate corner saddle", J=len(J), pinned=len(pinned))
    return x, LocalMinFlag.UNKNOWN

"""
Projected gradient descent on the box [-1, 1]^n with gradient mapping and
first/second-order local-minimum detection.
"""

from time import monotonic
from typing import List, Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.logging import get_logger
from app.schemas.solver import (
    DescentConfig,
    DescentOutcome,
    DescentStep,
    EscapeCounts,
    LocalMinFlag,
    OutcomeKind,
)
from app.services.fourier.objective import ObjectiveContext
from app.services.optimizer.saddle import (
    LocalPolynomial,
    dec_inner_saddle,
    is_zero,
    use_hessian,
)

logger = get_logger(__name__)


def project_box(y: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(y, dtype=float), -1.0, 1.0)


def gradient_mapping(x: np.ndarray, g: np.ndarray, eta: float) -> np.ndarray:
    """G(x) = (x - P(x - eta * g)) / eta with P the box projection."""
    return (x - project_box(x - eta * g)) / eta


def is_feasible(
    ctx: ObjectiveContext,
    x: np.ndarray,
    tau_bool: float,
    rng: np.random.Generator,
    eps_zero: Optional[float] = None,
    samples: int = 3,
) -> Tuple[bool, np.ndarray]:
    """
    Whether F with the boundary coordinates of x fixed is constant.

    Boundary coordinates (|x_i| >= 1 - tau_bool) are snapped to +-1 and the
    remaining ones are tested by comparing F at random completions.

    Returns:
        (feasible, sorted 0-based boundary coordinates)
    """
    eps_zero = settings.EPS_ZERO if eps_zero is None else eps_zero
    x = np.asarray(x, dtype=float)
    boundary = np.abs(x) >= 1.0 - tau_bool
    pinned = np.nonzero(boundary)[0]
    if boundary.all():
        return True, pinned

    anchor = np.where(boundary, np.sign(x), 0.0)
    free = tuple(int(i) for i in np.nonzero(~boundary)[0])
    completion = LocalPolynomial(ctx, anchor, free)
    reference = float(completion(rng.uniform(-1.0, 1.0, size=len(free))))
    feasible = is_zero(completion.minus(reference), rng, eps_zero, samples)
    return feasible, pinned


def run_descent(
    ctx: ObjectiveContext,
    x0: np.ndarray,
    cfg: Optional[DescentConfig] = None,
    rng: Optional[np.random.Generator] = None,
    deadline: Optional[float] = None,
) -> DescentOutcome:
    """
    Minimize F from x0 until a local minimum, the global bound or a cap.

    Each iteration takes x <- P(x - step * grad). With line search the step
    starts from twice the last accepted one and is halved until
    F(x+) - F(x) <= -(step / 2) ||G_step(x)||^2, never going below the
    theoretical eta. Once ||G_eta(x)|| <= eps the point is classified:
    infeasible points escape through dec_inner_saddle, feasible points with
    non-vanishing gradient on every boundary coordinate are local minima, and
    the rest go through use_hessian.

    Args:
        deadline: time.monotonic() value after which the run stops with
            IterationCap
    """
    cfg = cfg or DescentConfig()
    rng = rng if rng is not None else np.random.default_rng(settings.DEFAULT_SEED)
    eta = cfg.step_size(ctx)
    lower = ctx.lower_bound

    x = project_box(x0)
    value = float(ctx.value(x))
    grad = ctx.gradient(x)
    step = eta
    escapes = EscapeCounts()
    trace: Optional[List[DescentStep]] = [] if cfg.trace else None
    norm = float("inf")

    def outcome(kind: OutcomeKind, iters: int) -> DescentOutcome:
        logger.debug(
            "Descent finished",
            kind=kind.value,
            value=value,
            iters=iters,
            dec_inner_saddle=escapes.dec_inner_saddle,
            use_hessian=escapes.use_hessian,
        )
        return DescentOutcome(
            point=x,
            kind=kind,
            value=value,
            iters=iters,
            escapes=escapes,
            grad_map_norm=norm,
            trace=trace,
        )

    for it in range(cfg.max_iters):
        if value <= lower + cfg.eps_zero:
            return outcome(OutcomeKind.CONVERGED, it)
        if deadline is not None and monotonic() >= deadline:
            return outcome(OutcomeKind.ITERATION_CAP, it)

        norm = float(np.linalg.norm(gradient_mapping(x, grad, eta)))
        if norm > cfg.eps:
            x_next, value_next, step_used, step_norm = _pgd_step(
                ctx, x, value, grad, eta, step, cfg.line_search
            )
            if trace is not None:
                trace.append(
                    DescentStep(
                        iteration=it,
                        value_before=value,
                        value_after=value_next,
                        step=step_used,
                        grad_map_norm=step_norm,
                    )
                )
            step = 2.0 * step_used if cfg.line_search else eta
            x, value = x_next, value_next
            grad = ctx.gradient(x)
            continue

        feasible, pinned = is_feasible(
            ctx, x, cfg.tau_bool, rng, cfg.eps_zero, cfg.zero_test_samples
        )
        if not feasible:
            escapes.dec_inner_saddle += 1
            x_next, restart = dec_inner_saddle(ctx, x, step, cfg, rng)
            if restart:
                return outcome(OutcomeKind.UNKNOWN, it)
        else:
            if np.all(np.abs(grad[pinned]) > cfg.eps):
                return outcome(OutcomeKind.LOCAL_MIN, it)
            escapes.use_hessian += 1
            x_next, flag = use_hessian(ctx, x, cfg, step)
            if flag == LocalMinFlag.TRUE:
                return outcome(OutcomeKind.LOCAL_MIN, it)
            if flag == LocalMinFlag.UNKNOWN:
                return outcome(OutcomeKind.UNKNOWN, it)

        x = x_next
        value = float(ctx.value(x))
        grad = ctx.gradient(x)

    return outcome(OutcomeKind.ITERATION_CAP, cfg.max_iters)


def _pgd_step(
    ctx: ObjectiveContext,
    x: np.ndarray,
    value: float,
    grad: np.ndarray,
    eta: float,
    step: float,
    line_search: bool,
) -> Tuple[np.ndarray, float, float, float]:
    """One projected step; returns (x+, F(x+), step used, ||G_step(x)||)."""
    while True:
        mapping = gradient_mapping(x, grad, step)
        x_next = project_box(x - step * grad)
        value_next = float(ctx.value(x_next))
        sq_norm = float(mapping @ mapping)
        if not line_search or step <= eta:
            break
        if value_next - value <= -0.5 * step * sq_norm:
            break
        step = max(0.5 * step, eta)
    return x_next, value_next, step, float(np.sqrt(sq_norm))

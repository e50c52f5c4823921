"""
Restart orchestration: descent from random starts, rounding of terminal
points, best-witness tracking and mode-dependent stopping.
"""

import contextvars
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from time import monotonic, perf_counter
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from app.core.exceptions import (
    InfeasiblePointException,
    ValidationException,
    WeightRuleException,
)
from app.core.logging import get_logger, restart_var, run_id_var
from app.models.formula import (
    FALSE,
    TRUE,
    BooleanAssignment,
    Formula,
    as_boolean_assignment,
)
from app.schemas.solver import (
    DescentConfig,
    ModeKind,
    RestartStats,
    SolveResult,
    SolverConfig,
    SolveStatus,
    WeightRule,
)
from app.services.formula.semantics import clause_truth
from app.services.fourier.objective import ObjectiveContext
from app.services.optimizer.descent import is_feasible, run_descent

logger = get_logger(__name__)


def round_randomized(
    a: np.ndarray, rng: np.random.Generator, samples: Optional[int] = None
) -> BooleanAssignment:
    """
    Independent rounding with P(R(a)_i = -1) = (1 - a_i) / 2.

    Returns one assignment (n,) or, with `samples`, a (samples, n) batch.
    """
    a = np.asarray(a, dtype=float)
    shape = a.shape if samples is None else (samples,) + a.shape
    draws = rng.random(shape)
    return np.where(draws < (1.0 - a) / 2.0, TRUE, FALSE).astype(np.int8)


def round_feasible(
    ctx: ObjectiveContext,
    a: np.ndarray,
    cfg: Optional[DescentConfig] = None,
    rng: Optional[np.random.Generator] = None,
) -> BooleanAssignment:
    """
    Value-preserving rounding of a feasible point.

    Boundary coordinates snap to their sign, interior ones are set to +1.

    Raises:
        InfeasiblePointException: F still depends on the interior coordinates.
    """
    cfg = cfg or DescentConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    a = np.asarray(a, dtype=float)
    feasible, _ = is_feasible(
        ctx, a, cfg.tau_bool, rng, cfg.eps_zero, cfg.zero_test_samples
    )
    if not feasible:
        fractional = int(np.sum(np.abs(a) < 1.0 - cfg.tau_bool))
        raise InfeasiblePointException(
            "Point is not feasible; use randomized rounding", fractional=fractional
        )
    boundary = np.abs(a) >= 1.0 - cfg.tau_bool
    return np.where(boundary, np.sign(a), FALSE).astype(np.int8)


def satisfied_matrix(formula: Formula, assignments: np.ndarray) -> np.ndarray:
    """(r, m) truth table of every clause under every assignment row."""
    rows = np.atleast_2d(assignments)
    return np.column_stack([clause_truth(c, rows) for c in formula.clauses])


def count_satisfied(
    formula: Formula, b: BooleanAssignment, weights: Optional[np.ndarray] = None
) -> Tuple[int, float]:
    """
    (number, total weight) of clauses satisfied by b.

    Raises:
        ValueError: b is not a +-1 vector of length n.
    """
    b = as_boolean_assignment(b, formula.n)
    if weights is None:
        weights = default_weights(formula, WeightRule.UNIFORM)
    mask = satisfied_matrix(formula, b)[0]
    return int(mask.sum()), float(np.asarray(weights, dtype=float) @ mask)


def satisfaction_breakdown(formula: Formula, b: BooleanAssignment) -> pd.DataFrame:
    """Satisfied and total clause counts per clause kind, plus a total row."""
    mask = satisfied_matrix(formula, b)[0]
    frame = pd.DataFrame(
        {"kind": [c.kind.value for c in formula.clauses], "satisfied": mask}
    )
    summary = frame.groupby("kind", sort=True).agg(
        satisfied=("satisfied", "sum"), total=("satisfied", "size")
    )
    summary.loc["total"] = summary.sum()
    return summary.astype(int)


def default_weights(formula: Formula, rule: WeightRule) -> np.ndarray:
    """
    Clause weights under a weight rule.

    Raises:
        WeightRuleException: EXPLICIT rule on a clause without a weight.
    """
    if rule == WeightRule.UNIFORM:
        return np.ones(formula.m)
    if rule == WeightRule.CLAUSE_LENGTH:
        return np.array([float(c.size) for c in formula.clauses])
    for index, clause in enumerate(formula.clauses):
        if clause.weight is None:
            raise WeightRuleException(
                f"Clause {index + 1} has no weight",
                rule=rule.value,
                clause_index=index,
            )
    return np.array([c.weight for c in formula.clauses])


@dataclass(frozen=True)
class RestartResult:
    index: int
    witness: BooleanAssignment
    satisfied: int
    satisfied_weight: float
    objective: float
    iters: int
    stats: RestartStats

    @property
    def rank(self) -> Tuple[float, float, int]:
        """Smaller is better: satisfied weight, then F, then restart index."""
        return (-self.satisfied_weight, self.objective, self.index)


class SolverService:
    """Runs restarts of the descent for one formula and configuration."""

    def __init__(self, formula: Formula, config: Optional[SolverConfig] = None):
        self.formula = formula
        self.config = config or SolverConfig()
        self.weights = default_weights(formula, self.config.weight_rule)
        self.ctx = ObjectiveContext.build(formula, self.weights)

        mode = self.config.mode
        if mode.kind == ModeKind.THRESHOLD and mode.target > formula.m:
            raise ValidationException(
                f"Threshold {mode.target} exceeds the clause count {formula.m}",
                field="mode",
            )

        self._lock = threading.Lock()
        self._stop = threading.Event()
        self._best: Optional[RestartResult] = None
        self._stats: List[RestartStats] = []
        self._iterations = 0
        self._started = 0
        self._seeds = np.random.SeedSequence(self.config.seed)

    def solve(self) -> SolveResult:
        start = perf_counter()
        run_id_var.set(uuid.uuid4().hex[:8])
        cfg = self.config
        deadline = monotonic() + cfg.time_budget if cfg.time_budget else None

        diagnostics = [
            f"clause {i + 1} is constant false" for i in self.ctx.const_false
        ]
        if diagnostics and cfg.mode.kind == ModeKind.SAT:
            logger.warning(
                "Unsatisfiable clause present", clauses=len(self.ctx.const_false)
            )
            witness = np.full(self.formula.n, FALSE, dtype=np.int8)
            return self._result(witness, 0, perf_counter() - start, diagnostics)

        logger.info(
            "Solve started",
            n=self.formula.n,
            m=self.formula.m,
            mode=str(cfg.mode),
            restarts=cfg.restarts,
            parallelism=cfg.parallelism,
        )
        if cfg.parallelism == 1:
            self._worker(deadline)
        else:
            with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
                futures = [
                    pool.submit(contextvars.copy_context().run, self._worker, deadline)
                    for _ in range(cfg.parallelism)
                ]
                for future in futures:
                    future.result()

        self._stats.sort(key=lambda s: s.restart)
        best = self._best
        if best is None:
            # Budget ran out before the first restart finished.
            witness = np.full(self.formula.n, FALSE, dtype=np.int8)
        else:
            witness = best.witness
        elapsed = perf_counter() - start
        result = self._result(witness, self._started, elapsed, diagnostics)
        logger.info(
            "Solve finished",
            status=result.status.value,
            satisfied=result.satisfied,
            m=result.m,
            restarts=result.restarts_used,
        )
        return result

    def _worker(self, deadline: Optional[float]) -> None:
        while True:
            with self._lock:
                index = self._started
                if self._stop.is_set():
                    return
                limit = self.config.restarts
                if limit is not None and index >= limit:
                    return
                if deadline is not None and monotonic() >= deadline:
                    return
                seed = self._seeds.spawn(1)[0]
                self._started += 1

            result = self._run_restart(index, seed, deadline)
            with self._lock:
                self._stats.append(result.stats)
                self._iterations += result.iters
                if self._best is None or result.rank < self._best.rank:
                    self._best = result
                    logger.info(
                        "Best witness improved",
                        restart=index,
                        satisfied=result.satisfied,
                        weight=result.satisfied_weight,
                    )
                if self._goal_met(result):
                    self._stop.set()

    def _run_restart(
        self, index: int, seed: np.random.SeedSequence, deadline: Optional[float]
    ) -> RestartResult:
        token = restart_var.set(index)
        try:
            return self._descend_and_round(index, seed, deadline)
        finally:
            restart_var.reset(token)

    def _descend_and_round(
        self, index: int, seed: np.random.SeedSequence, deadline: Optional[float]
    ) -> RestartResult:
        rng = np.random.default_rng(seed)
        cfg = self.config
        x0 = rng.uniform(-1.0, 1.0, size=self.formula.n)
        outcome = run_descent(self.ctx, x0, cfg.descent, rng=rng, deadline=deadline)

        candidates = [round_randomized(outcome.point, rng, cfg.rounding_samples)]
        rounding = "randomized"
        try:
            exact = round_feasible(self.ctx, outcome.point, cfg.descent, rng)
            candidates.insert(0, exact[None, :])
            rounding = "feasible"
        except InfeasiblePointException:
            pass

        batch = np.vstack(candidates)
        mask = satisfied_matrix(self.formula, batch)
        weights = mask @ self.weights
        values = self.ctx.value(batch.astype(float))
        best = int(np.lexsort((values, -weights))[0])

        stats = RestartStats(
            restart=index,
            outcome=outcome.kind,
            value=outcome.value,
            iters=outcome.iters,
            dec_inner_saddle=outcome.escapes.dec_inner_saddle,
            use_hessian=outcome.escapes.use_hessian,
            rounding=rounding,
            satisfied=int(mask[best].sum()),
            satisfied_weight=float(weights[best]),
        )
        logger.debug("Restart finished", **stats.model_dump(mode="json"))
        return RestartResult(
            index=index,
            witness=batch[best].astype(np.int8),
            satisfied=stats.satisfied,
            satisfied_weight=stats.satisfied_weight,
            objective=float(values[best]),
            iters=outcome.iters,
            stats=stats,
        )

    def _goal_met(self, result: RestartResult) -> bool:
        mode = self.config.mode
        if mode.kind == ModeKind.THRESHOLD and result.satisfied >= mode.target:
            return True
        return result.satisfied == self.formula.m

    def _result(
        self,
        witness: BooleanAssignment,
        restarts: int,
        wall_time: float,
        diagnostics: List[str],
    ) -> SolveResult:
        # Satisfaction is re-checked on the truth tables, never read off F.
        satisfied, weight = count_satisfied(self.formula, witness, self.weights)
        mode = self.config.mode
        if satisfied == self.formula.m:
            status = SolveStatus.SAT
        elif mode.kind == ModeKind.THRESHOLD and satisfied >= mode.target:
            status = SolveStatus.THRESHOLD_MET
        else:
            status = SolveStatus.UNKNOWN_BEST_FOUND

        return SolveResult(
            status=status,
            witness=witness,
            satisfied=satisfied,
            satisfied_weight=weight,
            m=self.formula.m,
            total_weight=self.ctx.total_weight,
            objective=float(self.ctx.value(witness.astype(float))),
            restarts_used=restarts,
            iterations_total=self._iterations,
            wall_time=wall_time,
            restart_stats=list(self._stats),
            diagnostics=diagnostics,
        )


def solve(formula: Formula, config: Optional[SolverConfig] = None) -> SolveResult:
    """Solve a formula with a fresh SolverService."""
    return SolverService(formula, config).solve()

"""
CLI commands for solving, generating and checking hybrid formulas.

Report grammar on stdout ("c" comment, "s" status, "v" model, "o" objective).
Exit codes: 10 when every clause is satisfied, 0 otherwise, 1 on error.
"""

from typing import Callable, Optional

import click
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import (
    BaseCustomException,
    ValidationException,
    log_exception,
)
from app.core.logging import get_logger, setup_logging
from app.models.formula import Formula
from app.schemas.benchmark import GeneratedInstance
from app.schemas.solver import (
    DescentConfig,
    SolveResult,
    SolverConfig,
    SolverMode,
    SolveStatus,
    WeightRule,
)
from app.services.factories.generator_factory import (
    gen_parity_learning,
    gen_random_hybrid,
    gen_vertex_cover,
)
from app.services.formula.parser import (
    format_model,
    parse_formula,
    parse_model,
    serialize_formula,
)
from app.services.solver import count_satisfied, satisfaction_breakdown, solve

logger = get_logger(__name__)

EXIT_SAT = 10
EXIT_UNKNOWN = 0

CONVENTION = "c convention: -i means x_i True (value -1), i means x_i False (+1)"
AUTO_WEIGHTS = "auto"


def run_guarded(action: Callable[[], int], event: str) -> int:
    """Run a command body, turning domain and validation errors into exit 1."""
    try:
        return action()
    except ValidationError as e:
        exc = ValidationException.from_pydantic(e)
        log_exception(exc, event)
        raise click.ClickException(exc.message)
    except BaseCustomException as e:
        log_exception(e, event)
        raise click.ClickException(e.message)
    except ValueError as e:
        log_exception(e, event)
        raise click.ClickException(str(e))


def read_formula(source) -> Formula:
    return parse_formula(source.read())


def resolve_weight_rule(formula: Formula, choice: str) -> WeightRule:
    """'auto' uses explicit weights when every clause carries one."""
    if choice != AUTO_WEIGHTS:
        return WeightRule(choice)
    if formula.is_fully_weighted:
        return WeightRule.EXPLICIT
    return WeightRule.UNIFORM


def render_report(result: SolveResult, timing: bool) -> str:
    lines = [CONVENTION]
    if result.status == SolveStatus.SAT:
        lines.append("s SATISFIABLE")
    else:
        lines.append("s UNKNOWN")
    lines.append(format_model(result.witness))
    lines.append(f"o {result.satisfied}/{result.m}")
    lines.append(f"c status {result.status.value}")
    lines.append(
        f"c satisfied_weight {result.satisfied_weight:.6g}/{result.total_weight:.6g}"
    )
    lines.append(f"c restarts {result.restarts_used}")
    lines.append(f"c iterations {result.iterations_total}")
    lines.append(f"c objective {result.objective:.12g}")
    lines.extend(f"c diagnostic {d}" for d in result.diagnostics)
    if timing:
        lines.append(f"c wall_time {result.wall_time:.3f}")
    return "\n".join(lines)


@click.group()
@click.version_option(settings.APP_VERSION, prog_name=settings.APP_NAME)
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
    help="Overrides LOG_LEVEL",
)
@click.option(
    "--log-format",
    type=click.Choice(["console", "json"]),
    default=None,
    help="Overrides LOG_FORMAT",
)
def cli(log_level: Optional[str], log_format: Optional[str]):
    """Hybrid constraint satisfaction by Fourier-expansion descent."""
    setup_logging(log_level, log_format)


@cli.command("solve")
@click.argument("formula", type=click.File("r"))
@click.option("--seed", type=int, default=settings.DEFAULT_SEED, show_default=True)
@click.option(
    "--threads", type=int, default=settings.DEFAULT_THREADS, show_default=True
)
@click.option(
    "--restarts", type=int, default=settings.DEFAULT_RESTARTS, show_default=True
)
@click.option(
    "--time-limit",
    type=float,
    default=settings.DEFAULT_TIME_LIMIT,
    show_default=True,
    help="Seconds; 0 disables the time budget",
)
@click.option("--eta", type=float, default=None, help="Fixed initial step size")
@click.option("--eps", type=float, default=None, help="Gradient-mapping tolerance")
@click.option(
    "--mode",
    default="sat",
    show_default=True,
    help="sat, maxsat or threshold:<satisfied clauses>",
)
@click.option(
    "--weights",
    type=click.Choice([AUTO_WEIGHTS] + [r.value for r in WeightRule]),
    default=AUTO_WEIGHTS,
    show_default=True,
)
@click.option("--no-line-search", is_flag=True, help="Use the fixed step only")
@click.option("--timing", is_flag=True, help="Report wall time")
def solve_command(
    formula,
    seed: int,
    threads: int,
    restarts: int,
    time_limit: float,
    eta: Optional[float],
    eps: Optional[float],
    mode: str,
    weights: str,
    no_line_search: bool,
    timing: bool,
):
    """Solve FORMULA (a path, or - for stdin)."""

    def _solve() -> int:
        parsed = read_formula(formula)
        descent = {"line_search": not no_line_search}
        if eta is not None:
            descent["eta"] = eta
        if eps is not None:
            descent["eps"] = eps
        config = SolverConfig(
            restarts=restarts,
            time_budget=time_limit or None,
            parallelism=threads,
            seed=seed,
            mode=SolverMode.parse(mode),
            weight_rule=resolve_weight_rule(parsed, weights),
            descent=DescentConfig(**descent),
        )
        logger.info("Solving", n=parsed.n, m=parsed.m, mode=str(config.mode))
        result = solve(parsed, config)
        click.echo(render_report(result, timing))
        return EXIT_SAT if result.status == SolveStatus.SAT else EXIT_UNKNOWN

    raise SystemExit(run_guarded(_solve, "Solve failed"))


@cli.group("gen")
def gen():
    """Generate benchmark formulas with metadata."""
    pass


def write_instance(instance: GeneratedInstance, out) -> None:
    out.write(serialize_formula(instance.formula))
    click.echo(
        f"Generated {instance.metadata.family.value}: "
        f"n={instance.formula.n} m={instance.formula.m}",
        err=True,
    )


@gen.command("vc")
@click.option("--n", "n_vertices", type=int, required=True, help="Graph vertices")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.File("w"), default="-")
def gen_vc(n_vertices: int, seed: int, out):
    """Vertex cover of a random cubic graph."""
    run_guarded(
        lambda: write_instance(gen_vertex_cover(n_vertices, seed=seed), out),
        "Generation failed",
    )


@gen.command("parity")
@click.option("--n", type=int, required=True, help="Hidden bits")
@click.option("--e", type=float, default=0.25, show_default=True, help="Noise rate")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--bernoulli", is_flag=True, help="Independent Bernoulli(e) flips")
@click.option("--out", type=click.File("w"), default="-")
def gen_parity(n: int, e: float, seed: int, bernoulli: bool, out):
    """Noisy parity learning as XOR clauses."""
    run_guarded(
        lambda: write_instance(
            gen_parity_learning(n, e=e, seed=seed, bernoulli_noise=bernoulli), out
        ),
        "Generation failed",
    )


@gen.command("hybrid")
@click.option("--n", type=int, required=True, help="Variables")
@click.option("--r", type=float, default=1.0, show_default=True, help="CNF ratio")
@click.option("--s", type=float, default=0.2, show_default=True, help="XOR ratio")
@click.option("--l", "length", type=float, default=0.1, show_default=True)
@click.option("--k", type=float, default=0.5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.File("w"), default="-")
def gen_hybrid(
    n: int, r: float, s: float, length: float, k: float, seed: int, out
):
    """Random 3-CNF + XOR + global cardinality mixture."""
    run_guarded(
        lambda: write_instance(
            gen_random_hybrid(n, r=r, s=s, l=length, k=k, seed=seed), out
        ),
        "Generation failed",
    )


@cli.command("check")
@click.argument("formula", type=click.File("r"))
@click.argument("model", type=click.File("r"), required=False)
def check(formula, model):
    """Check MODEL (or the certificate in FORMULA's metadata) against FORMULA."""

    def _check() -> int:
        parsed = read_formula(formula)
        meta = parsed.metadata or {}
        if model is not None:
            values = parse_model(model.read(), parsed.n)
        elif meta.get("certificate"):
            certificate = " ".join(str(v) for v in meta["certificate"])
            values = parse_model(f"v {certificate} 0", parsed.n)
        else:
            raise click.UsageError("No MODEL given and no certificate in metadata")

        satisfied, _ = count_satisfied(parsed, values)
        breakdown = satisfaction_breakdown(parsed, values)
        for line in breakdown.to_string().splitlines():
            click.echo(f"c {line}")
        click.echo(f"o {satisfied}/{parsed.m}")

        target = meta.get("target_satisfied")
        if target is not None:
            reached = "reached" if satisfied >= int(target) else "missed"
            click.echo(f"c target {target} {reached}")
        if satisfied < parsed.m:
            click.echo(f"c FAILED: {satisfied} satisfied, {parsed.m} required")
            return 1
        click.echo("c OK")
        return 0

    raise SystemExit(run_guarded(_check, "Check failed"))

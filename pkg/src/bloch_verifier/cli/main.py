"""
Bloch Verifier - Command-Line Interface

Subcommands compute correlation tensors and scalar products for named states,
evaluate hidden-variable models, tabulate the violation ratio, run scenario
files and the full verification suite.

Exit codes: 0 all checks passed, 1 a verdict failed, 2 configuration or
domain error, 3 resource budget exceeded.
"""

import functools
import sys
from typing import Dict, List, Optional, Sequence, Tuple

import click
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from rich.console import Console

from .. import __version__
from ..analysis.export import (
    export_csv,
    load_model_spec,
    load_scenario,
    quantities_frame,
    ratio_table,
    render_frame,
    render_report,
    render_summary,
    to_jsonl,
    write_jsonl,
)
from ..analysis.runner import build_subjects, run_scenario, verify_all, with_overrides
from ..analysis.scenarios import builtin_names, get_builtin
from ..config import settings
from ..errors import (
    ConfigError,
    DomainError,
    NumericError,
    ResourceBudgetError,
    StateValidationError,
)
from ..lhv.spec import (
    HemisphericSpec,
    PerfectMixingSpec,
    RandomEnsembleSpec,
    SaturatingSpec,
    SimulatorSpec,
)
from ..models.scenario import (
    BellSpec,
    GhzSpec,
    GridSpec,
    MixedProductSpec,
    PureProductSpec,
    RandomProductSpec,
    Report,
    ScenarioConfig,
)
from ..quantum.correlations import correlation_tensor
from ..quantum.states import default_rng

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3

console = Console()


class CliOptions(BaseModel):
    """Global options shared by every subcommand."""

    model_config = ConfigDict(frozen=True)

    grid: Optional[GridSpec] = None
    tolerances: Dict[str, float] = Field(default_factory=dict)
    output_format: str = "table"
    seed: Optional[int] = None
    output_dir: str


def configure_logging(level: str, log_file: Optional[str] = None) -> None:
    """Send log records to stderr at ``level`` and, optionally, to a rotating file."""
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), format="<level>{level: <8}</level> | {name}:{function} - {message}")
    if log_file:
        logger.add(log_file, level="DEBUG", rotation="10 MB", retention=5)


def _parse_tolerances(pairs: Sequence[str]) -> Dict[str, float]:
    overrides = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            raise click.BadParameter(f"expected NAME=VALUE, got '{pair}'", param_hint="--tolerance")
        try:
            overrides[name.strip().replace("-", "_")] = float(value)
        except ValueError:
            raise click.BadParameter(f"'{value}' is not a number", param_hint="--tolerance") from None
    return overrides


def _parse_vector(text: str, size: int, what: str) -> Tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise click.BadParameter(f"'{text}' is not a comma-separated list of numbers", param_hint=what) from None
    if len(values) != size:
        raise click.BadParameter(f"expected {size} components, got {len(values)}", param_hint=what)
    return values


def handle_errors(command):
    """Map library exceptions to the documented exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ResourceBudgetError as e:
            logger.error(str(e))
            console.print(f"[red]Resource error:[/red] {e}")
            sys.exit(EXIT_RESOURCE)
        except (ConfigError, DomainError, StateValidationError, ValidationError) as e:
            logger.error(str(e))
            console.print(f"[red]Configuration error:[/red] {e}")
            sys.exit(EXIT_CONFIG)
        except NumericError as e:
            logger.error(str(e))
            console.print(f"[red]Numeric error:[/red] {e}")
            sys.exit(EXIT_FAILED)

    return wrapper


def _emit(reports: List[Report], options: CliOptions, save_as: Optional[str] = None) -> int:
    """Print reports in the selected format, optionally save records; return the exit code."""
    if options.output_format in ("table", "both"):
        for report in reports:
            render_report(report, console)
    if options.output_format in ("jsonl", "both"):
        click.echo(to_jsonl(reports), nl=False)
    if save_as is not None:
        directory = settings.ensure_output_dir(options.output_dir)
        write_jsonl(reports, directory / f"{save_as}.jsonl")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def _with_options(config: ScenarioConfig, options: CliOptions, max_parties: Optional[int] = None) -> ScenarioConfig:
    updated = with_overrides(config, options.tolerances, max_parties, options.seed, options.grid)
    if updated is None:
        raise ConfigError(f"No party count of '{config.name}' is within the cap of {max_parties}", field="parties")
    return updated


# ---------------------------------------------------------------------------
# Group
# ---------------------------------------------------------------------------


@click.group()
@click.option("--n-theta", type=click.IntRange(min=1), default=None, help="Gauss-Legendre nodes in cos(theta).")
@click.option("--n-phi", type=click.IntRange(min=1), default=None, help="Trapezoid nodes in phi.")
@click.option(
    "--tolerance",
    "tolerance_pairs",
    multiple=True,
    metavar="NAME=VALUE",
    help="Override an acceptance tolerance, e.g. numeric_relative=1e-12. Repeatable.",
)
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["table", "jsonl", "both"]),
    default="table",
    show_default=True,
)
@click.option("--seed", type=int, default=None, help="Seed for randomized states and models.")
@click.option("--output-dir", type=click.Path(file_okay=False), default=None, help="Report directory.")
@click.option("--log-level", default=None, help="Log level for stderr (default from settings).")
@click.version_option(__version__, prog_name="bloch-verifier")
@click.pass_context
def cli(ctx, n_theta, n_phi, tolerance_pairs, output_format, seed, output_dir, log_level):
    """Verify the 3^N gap between separable and hidden-variable correlation scalar products."""
    configure_logging(log_level or settings.log_level, settings.log_file)
    ctx.obj = CliOptions(
        grid=(
            GridSpec(n_theta=n_theta or settings.n_theta, n_phi=n_phi or settings.n_phi)
            if n_theta or n_phi
            else None
        ),
        tolerances=_parse_tolerances(tolerance_pairs),
        output_format=output_format,
        seed=seed,
        output_dir=output_dir or settings.output_dir,
    )


# ---------------------------------------------------------------------------
# State and model selection
# ---------------------------------------------------------------------------

STATE_KINDS = ["pure-product", "mixed-product", "random-product", "ghz", "bell"]
MODEL_KINDS = ["saturating", "hemispheric-disagreement", "perfect-mixing", "threshold-simulator", "random-ensemble"]


def state_options(command):
    command = click.option(
        "--state", "state_kind", type=click.Choice(STATE_KINDS), default="pure-product", show_default=True
    )(command)
    command = click.option("--parties", "-n", type=click.IntRange(min=1), default=1, show_default=True)(command)
    command = click.option(
        "--angles", multiple=True, metavar="THETA,PHI", help="Per-party angles (one pair is reused)."
    )(command)
    command = click.option(
        "--bloch", "blochs", multiple=True, metavar="X,Y,Z", help="Per-party Bloch vectors (one is reused)."
    )(command)
    command = click.option(
        "--visibility", type=click.FloatRange(0.0, 1.0), default=1.0, show_default=True, help="GHZ visibility."
    )(command)
    return command


def _state_spec(state_kind: str, angles: Sequence[str], blochs: Sequence[str], visibility: float):
    if state_kind == "pure-product":
        pairs = [_parse_vector(a, 2, "--angles") for a in angles] or [(0.0, 0.0)]
        return PureProductSpec(angles=pairs)
    if state_kind == "mixed-product":
        if not blochs:
            raise click.BadParameter("mixed-product needs at least one --bloch", param_hint="--bloch")
        return MixedProductSpec(blochs=[_parse_vector(b, 3, "--bloch") for b in blochs])
    if state_kind == "random-product":
        return RandomProductSpec(pure=True)
    if state_kind == "ghz":
        return GhzSpec(visibility=visibility)
    return BellSpec()


def _state_config(name, computations, state_kind, parties, angles, blochs, visibility, options) -> ScenarioConfig:
    return ScenarioConfig(
        name=name,
        parties=[parties],
        state=_state_spec(state_kind, angles, blochs, visibility),
        computations=computations,
        grid=options.grid or GridSpec(),
        seed=options.seed,
    )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


@cli.command()
@state_options
@click.option("--tol", "entry_tol", type=float, default=1e-12, show_default=True, help="Hide smaller entries.")
@click.pass_obj
@handle_errors
def tensor(options: CliOptions, state_kind, parties, angles, blochs, visibility, entry_tol):
    """Correlation tensor T of a state and its separability verdict."""
    config = _with_options(
        _state_config("tensor", ["tensor", "separability"], state_kind, parties, angles, blochs, visibility, options),
        options,
    )
    subject = build_subjects(config, parties, default_rng(config.seed))[0]
    entries = correlation_tensor(subject.state).nonzero_entries(entry_tol)
    if options.output_format != "jsonl":
        for label, value in entries.items():
            console.print(f"  T[{label}] = {value:.17g}")
    sys.exit(_emit([run_scenario(config)], options))


@cli.command("scalar-product")
@state_options
@click.option("--numeric/--no-numeric", default=True, show_default=True, help="Also integrate on the product grid.")
@click.pass_obj
@handle_errors
def scalar_product(options: CliOptions, state_kind, parties, angles, blochs, visibility, numeric):
    """(E_Sep, E_Sep) in closed form and by quadrature."""
    computations = ["tensor", "exact-scalar-product"] + (["numeric-scalar-product"] if numeric else [])
    config = _with_options(
        _state_config("scalar-product", computations, state_kind, parties, angles, blochs, visibility, options),
        options,
    )
    sys.exit(_emit([run_scenario(config)], options))


@cli.command()
@click.option("--model", "model_kind", type=click.Choice(MODEL_KINDS), default="saturating", show_default=True)
@click.option("--model-file", type=click.Path(exists=True, dir_okay=False), help="YAML model spec.")
@click.option("--parties", "-n", type=click.IntRange(min=1), multiple=True, help="Party counts (default 1).")
@click.option("--bloch", default="0,0,1", metavar="X,Y,Z", show_default=True, help="Simulator Bloch vector.")
@click.option("--resolution", type=click.IntRange(min=1), default=None, help="Simulator hidden-value count.")
@click.option("--members", type=click.IntRange(min=1), default=4, show_default=True, help="Random ensemble size.")
@click.pass_obj
@handle_errors
def lhv(options: CliOptions, model_kind, model_file, parties, bloch, resolution, members):
    """(E_LR, E_LR) of a hidden-variable model against (4pi)^N."""
    if model_file:
        spec = load_model_spec(model_file)
    elif model_kind == "saturating":
        spec = SaturatingSpec()
    elif model_kind == "hemispheric-disagreement":
        spec = HemisphericSpec()
    elif model_kind == "perfect-mixing":
        spec = PerfectMixingSpec()
    elif model_kind == "threshold-simulator":
        spec = SimulatorSpec(bloch=_parse_vector(bloch, 3, "--bloch"), resolution=resolution)
    else:
        spec = RandomEnsembleSpec(members=members)

    computations = ["lhv-scalar-product", "lhv-bound"]
    if isinstance(spec, SimulatorSpec):
        computations.append("simulator-fidelity")
    config = ScenarioConfig(
        name=f"lhv-{spec.type}",
        parties=list(parties) or [1],
        model=spec,
        computations=computations,
        grid=options.grid or GridSpec(),
        seed=options.seed,
    )
    sys.exit(_emit([run_scenario(_with_options(config, options))], options))


@cli.command()
@click.option("--max-parties", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Export the table as CSV.")
@click.pass_obj
@handle_errors
def ratio(options: CliOptions, max_parties, csv_path):
    """(E_LR, E_LR)_max / (E_Sep, E_Sep)_max = 3^N for N = 1..max-parties."""
    config = _with_options(
        ScenarioConfig(name="ratio", parties=list(range(1, max_parties + 1)), computations=["ratio"]), options
    )
    frame = ratio_table(max_parties)
    if options.output_format != "jsonl":
        render_frame(frame, "Violation ratio", console)
    if csv_path:
        export_csv(frame, csv_path)
    report = run_scenario(config)
    if options.output_format in ("jsonl", "both"):
        click.echo(to_jsonl([report]), nl=False)
    sys.exit(EXIT_OK if report.passed else EXIT_FAILED)


@cli.command()
@click.argument("scenario_file", required=False, type=click.Path(dir_okay=False))
@click.option("--builtin", "builtin_name", type=click.Choice(builtin_names()), default=None)
@click.option("--max-parties", type=click.IntRange(min=1), default=None)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Export quantities as CSV.")
@click.option("--save/--no-save", default=True, show_default=True, help="Write JSONL records to the output dir.")
@click.pass_obj
@handle_errors
def run(options: CliOptions, scenario_file, builtin_name, max_parties, csv_path, save):
    """Run a scenario file or a built-in scenario."""
    if (scenario_file is None) == (builtin_name is None):
        raise ConfigError("Give exactly one of SCENARIO_FILE or --builtin")
    config = load_scenario(scenario_file) if scenario_file else get_builtin(builtin_name)
    report = run_scenario(_with_options(config, options, max_parties))
    if csv_path:
        export_csv(quantities_frame([report]), csv_path)
    sys.exit(_emit([report], options, save_as=config.name if save else None))


@cli.command()
@click.option("--max-parties", type=click.IntRange(min=1), default=None, help="Skip party counts above this.")
@click.option("--scenario", "scenarios", multiple=True, type=click.Choice(builtin_names()), help="Restrict scenarios.")
@click.option("--properties/--no-properties", default=True, show_default=True, help="Run the property suites.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Export quantities as CSV.")
@click.option("--save/--no-save", default=True, show_default=True, help="Write JSONL records to the output dir.")
@click.pass_obj
@handle_errors
def verify(options: CliOptions, max_parties, scenarios, properties, csv_path, save):
    """Run every built-in scenario and property suite."""
    aggregate = verify_all(
        tolerance_overrides=options.tolerances,
        max_parties=max_parties,
        seed=options.seed,
        grid=options.grid,
        scenarios=scenarios or None,
        include_properties=properties,
    )
    if csv_path:
        export_csv(quantities_frame(aggregate.reports), csv_path)
    if options.output_format in ("table", "both"):
        for report in aggregate.reports:
            if not report.passed:
                render_report(report, console)
        render_summary(aggregate, console)
    if options.output_format in ("jsonl", "both"):
        click.echo(to_jsonl(aggregate.reports), nl=False)
    if save:
        write_jsonl(aggregate.reports, settings.ensure_output_dir(options.output_dir) / "verify.jsonl")
    sys.exit(EXIT_OK if aggregate.passed else EXIT_FAILED)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()

import functools
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
import pandas as pd
from click.core import ParameterSource
from pydantic import ValidationError

import shape_sensing_factory.operators  # noqa: F401  (registers the stages)
from shape_sensing_factory.configs.enums import LineMode
from shape_sensing_factory.configs.scenario import ScenarioConfig
from shape_sensing_factory.configs.stages import (
    AnalyzeOptions,
    EstimateOptions,
    SimulateOptions,
    ValidateProbOptions,
)
from shape_sensing_factory.estimation.rendering import render_probability_svg, render_svg
from shape_sensing_factory.factory.dagster_factory import DagsterFactory
from shape_sensing_factory.factory.helpers.config_loaders import load_scenario, scenario_from_dict, validation_message
from shape_sensing_factory.factory.helpers.persistence import read_json
from shape_sensing_factory.factory.registry import StageRegistry
from shape_sensing_factory.models.manifest import RunManifest
from shape_sensing_factory.models.shape import ShapeEstimate
from shape_sensing_factory.operators.analyze import AnalyzeOperator
from shape_sensing_factory.operators.estimate import EstimateOperator
from shape_sensing_factory.operators.pipeline import run_pipeline, run_sweep
from shape_sensing_factory.operators.simulate import SimulateOperator
from shape_sensing_factory.operators.validate_prob import ValidateProbOperator
from shape_sensing_factory.utils.doc_generator import generate_docs
from shape_sensing_factory.utils.exceptions import ShapeFactoryError

# exit status of an estimate that found nothing
EXIT_EMPTY = 2

SWEEP_RUNS_CSV = "sweep_runs.csv"
SWEEP_SUMMARY_CSV = "sweep_summary.csv"


def scenario_options(required: bool = True):
    """Options shared by every command that reads a scenario."""

    def decorator(f):
        options = [
            click.option(
                "--scenario",
                "-s",
                "scenario_path",
                type=click.Path(exists=True, dir_okay=False),
                help="Scenario YAML file." + ("" if required else " Optional."),
            ),
            click.option("--seed", type=int, help="Override the scenario seed."),
            click.option(
                "--mode",
                type=click.Choice([m.value for m in LineMode], case_sensitive=False),
                help="Override the random line placement.",
            ),
            click.option("--noise-eps-s", type=float, help="Override the slope noise standard deviation."),
            click.option("--noise-eps-l", type=float, help="Override the report loss probability."),
            click.option("--min-support", type=int, help="Override the estimator's judgement support."),
            click.option("--from-manifest", type=click.Path(exists=True, dir_okay=False), help="Replay the scenario of a run manifest."),
            click.option("--out", "-o", default="out", show_default=True, help="Output directory."),
            click.option("--workers", "-w", type=int, help="Worker threads (default: $SHAPE_FACTORY_WORKERS or 4)."),
        ]
        for option in reversed(options):
            f = option(f)

        @functools.wraps(f)
        def wrapper(*args, **kwargs):
            kwargs["scenario"] = _resolve_scenario(
                kwargs.pop("scenario_path"),
                kwargs.pop("from_manifest"),
                required,
                seed=kwargs.pop("seed"),
                mode=kwargs.pop("mode"),
                eps_s=kwargs.pop("noise_eps_s"),
                eps_l=kwargs.pop("noise_eps_l"),
                min_support=kwargs.pop("min_support"),
            )
            return f(*args, **kwargs)

        return wrapper

    return decorator


def handle_errors(f):
    """Print ShapeFactoryError in red and exit with status 1."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except ShapeFactoryError as e:
            click.secho(f"\n❌ {e}", fg="red", bold=True, err=True)
            sys.exit(1)

    return wrapper


def _overrides(seed, mode, eps_s, eps_l, min_support) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {"seed": seed, "epsilon_s": eps_s, "epsilon_l": eps_l}
    if mode is not None:
        overrides["line_mode"] = mode.upper()
    if min_support is not None:
        overrides["tolerances"] = {"estimator": {"min_support": min_support}}
    return {k: v for k, v in overrides.items() if v is not None}


def _read_manifest(path: str) -> RunManifest:
    try:
        return RunManifest.read(path)
    except (OSError, ValueError, TypeError) as e:
        raise ShapeFactoryError(f"unreadable manifest ({e})", file_name=path, error_type="CONFIG_ERROR")


def _resolve_scenario(
    scenario_path: Optional[str], from_manifest: Optional[str], required: bool, **flags
) -> Optional[ScenarioConfig]:
    overrides = _overrides(**flags)
    if from_manifest:
        manifest = _read_manifest(from_manifest)
        if manifest.scenario is None:
            if required:
                raise ShapeFactoryError("manifest records no scenario", file_name=from_manifest, error_type="CONFIG_ERROR")
            return None
        return scenario_from_dict(manifest.scenario, overrides=overrides, file_name=from_manifest)
    if scenario_path:
        return load_scenario(Path(scenario_path), overrides)
    if required:
        raise click.UsageError("--scenario or --from-manifest is required")
    return None


def _options(options_type, out: str, workers: Optional[int], **values):
    """Stage options from the CLI values; unset ones fall back to a replayed manifest, then to defaults."""
    data: Dict[str, Any] = {"out_dir": out}
    if workers is not None:
        data["workers"] = workers
    ctx = click.get_current_context()
    manifest_path = ctx.params.get("from_manifest")
    recorded = _read_manifest(manifest_path).options if manifest_path else {}
    for name, value in values.items():
        if ctx.get_parameter_source(name) in (None, ParameterSource.DEFAULT) and name in recorded:
            value = recorded[name]
        if value is not None:
            data[name] = value
    try:
        return options_type(**data)
    except ValidationError as e:
        raise ShapeFactoryError(validation_message(e), error_type="INVALID_ARGUMENT")


def _exit_if_empty(report) -> None:
    if report.is_empty:
        click.secho("No edge length class was found; nothing was estimated.", fg="yellow", err=True)
        sys.exit(EXIT_EMPTY)


def _print_summary(report) -> None:
    click.echo(report.to_text())


@click.group()
def cli():
    """Shape Sensing Factory CLI - simulate mobile distance sensors and estimate shapes from their traces."""
    pass


@cli.command()
@handle_errors
@scenario_options()
def simulate(scenario, out, workers):
    """Simulate sensor traces for a scenario."""
    SimulateOperator().execute(None, scenario, _options(SimulateOptions, out, workers))


@cli.command()
@handle_errors
@scenario_options()
@click.option("--traces", type=click.Path(dir_okay=False), help="Trace JSONL (default: <out>/traces.jsonl).")
@click.option("--analytic", is_flag=True, help="Cut exact continuous traces regenerated from the scenario.")
def analyze(scenario, out, workers, traces, analytic):
    """Segment traces and write observations."""
    AnalyzeOperator().execute(None, scenario, _options(AnalyzeOptions, out, workers, traces=traces, analytic=analytic))


@cli.command()
@handle_errors
@scenario_options(required=False)
@click.option("--observations", type=click.Path(dir_okay=False), help="Observation JSONL (default: <out>/observations.jsonl).")
@click.option("--known-params", type=click.Path(dir_okay=False), help="Known-parameter JSON (default: <out>/known_params.json).")
@click.option("--evaluate/--no-evaluate", default=True, show_default=True, help="Compare with the scenario polygon.")
def estimate(scenario, out, workers, observations, known_params, evaluate):
    """Estimate edge lengths, inner angles and the shape from observations."""
    options = _options(
        EstimateOptions, out, workers, observations=observations, known_params=known_params, evaluate=evaluate
    )
    result = EstimateOperator().execute(None, scenario, options)
    _print_summary(result["result"])
    _exit_if_empty(result["result"])


@cli.command()
@handle_errors
@scenario_options()
@click.option("--analytic", is_flag=True, help="Skip sampling and analyze exact continuous traces.")
def pipeline(scenario, out, workers, analytic):
    """simulate -> analyze -> estimate in one go."""
    options = _options(SimulateOptions, out, workers)
    results = run_pipeline(scenario, options.out_dir, options.workers, analytic=analytic)
    report = results["estimate"]["result"]
    _print_summary(report)
    _exit_if_empty(report)


@cli.command("validate-prob")
@handle_errors
@scenario_options(required=False)
@click.option("--lam", type=float, default=50.0, show_default=True, help="Edge length of the test square.")
@click.option("--samples", type=int, default=20000, show_default=True, help="Monte Carlo sensors per θ.")
@click.option("--theta-points", type=int, default=16, show_default=True, help="Points of the θ grid.")
@click.option("--sigma", type=float, default=3.0, show_default=True, help="Flag threshold in binomial σ.")
def validate_prob(scenario, out, workers, lam, samples, theta_points, sigma):
    """Compare closed-form detection probabilities with Monte Carlo frequencies."""
    options = _options(
        ValidateProbOptions, out, workers, lam=lam, samples=samples, theta_points=theta_points, sigma=sigma
    )
    result = ValidateProbOperator().execute(None, scenario, options)
    flagged = [r for r in result["result"] if r["flag"]]
    if flagged:
        click.secho(f"{len(flagged)} θ value(s) outside {options.sigma:g}σ", fg="yellow")
    else:
        click.secho(f"All {len(result['result'])} θ values within {options.sigma:g}σ", fg="green")


@cli.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="SVG file (default: next to the input).")
@click.option("--scenario", "-s", "scenario_path", type=click.Path(exists=True, dir_okay=False), help="Overlay the true polygon.")
@click.option("--title", help="Plot title.")
@handle_errors
def plot(input_path, output, scenario_path, title):
    """Render a report.json shape or a validate-prob CSV to SVG."""
    path = Path(input_path)
    output = output or str(path.with_suffix(".svg"))
    if path.suffix == ".csv":
        rows = pd.read_csv(path).to_dict("records")
        svg = render_probability_svg(rows, **({"title": title} if title else {}))
    elif path.suffix == ".json":
        shapes = read_json(path).get("shapes") or []
        shape = ShapeEstimate(**shapes[0]) if shapes else None
        truth = load_scenario(Path(scenario_path)).target() if scenario_path else None
        svg = render_svg(shape, truth, **({"title": title} if title else {}))
    else:
        raise ShapeFactoryError("plot reads a report .json or a validate-prob .csv", file_name=str(path), error_type="INVALID_ARGUMENT")
    with open(output, "w") as f:
        f.write(svg)
    click.echo(f"Wrote {output}")


def _int_list(value: str) -> List[int]:
    """'0-9' or '100,500,2000'."""
    out: List[int] = []
    for part in value.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


@cli.command()
@handle_errors
@scenario_options()
@click.option("--seeds", default="0-9", show_default=True, help="Seed list or range, e.g. '0-9' or '1,2,3'.")
@click.option("--n-s", "n_s_values", help="Sensor counts, e.g. '500,1000,2000' (default: the scenario's).")
@click.option("--analytic", is_flag=True, help="Analyze exact continuous traces.")
def sweep(scenario, out, workers, seeds, n_s_values, analytic):
    """Repeat the pipeline over seeds and sensor counts and tabulate the errors."""
    try:
        seed_list = _int_list(seeds)
        counts = _int_list(n_s_values) if n_s_values else [scenario.n_s]
    except ValueError as e:
        raise click.BadParameter(str(e))
    options = _options(SimulateOptions, out, workers)
    runs, summary = run_sweep(scenario, seed_list, counts, options.out_dir, options.workers, analytic=analytic)
    os.makedirs(options.out_dir, exist_ok=True)
    runs.to_csv(os.path.join(options.out_dir, SWEEP_RUNS_CSV), index=False)
    summary.to_csv(os.path.join(options.out_dir, SWEEP_SUMMARY_CSV), index=False)
    click.echo(summary.to_string(index=False))


@cli.command("list-stages")
def list_stages():
    """List all registered stages."""
    click.echo("Registered Stages:")
    click.echo("-" * 60)
    for stage in StageRegistry.stages():
        op_class = StageRegistry.get_operator(stage)
        click.echo(f"{stage.ljust(15)} -> {op_class.command.ljust(15)} | {op_class.__name__}")


@cli.command()
@click.argument("stage")
def describe(stage):
    """Describe the options of a stage (SIMULATE, ANALYZE, ESTIMATE, VALIDATE_PROB)."""
    op_class = StageRegistry.get_operator(stage.replace("-", "_"))
    if not op_class:
        click.secho(f"No stage named {stage}", fg="yellow")
        return

    click.secho(f"Stage: {op_class.__name__} ({op_class.command})", bold=True)
    click.echo("=" * 40)
    click.secho("\n[Options]", fg="cyan", bold=True)
    _print_schema(op_class.options_schema)


def _print_schema(model):
    """Helper to print Pydantic model fields in a human-readable way."""
    schema = model.model_json_schema()
    properties = schema.get("properties", {})
    required = schema.get("required", [])

    for field, info in properties.items():
        is_req = "*" if field in required else " "
        f_type = info.get("type", "any")
        desc = info.get("description", "")
        click.echo(f"{is_req} {field.ljust(20)} | {f_type.ljust(10)} | {desc}")


@cli.command()
@click.option("--path", "-p", required=True, type=click.Path(exists=True), help="Path to the workspace directory.")
def lint(path):
    """Build Dagster definitions from every scenario under <path>/defs."""
    base_path = Path(path)
    # definitions.py or defs/ given: move up to the workspace root
    if base_path.suffix == ".py" or base_path.name == "defs":
        base_path = base_path.parent

    click.echo(f"Linting scenarios in: {base_path}")
    try:
        DagsterFactory(base_dir=base_path, verbose_build=True).build_definitions()
        click.secho("\n✅ All scenarios linted successfully!", fg="green", bold=True)
    except Exception as e:
        click.secho(f"\n❌ Linting failed: {e}", fg="red", bold=True)
        sys.exit(1)


@cli.command()
@click.option("--output", "-o", default="REFERENCE.md", show_default=True, help="Markdown file to write.")
def docs(output):
    """Generate the scenario and stage reference."""
    generate_docs(output)
    click.echo(f"Documentation generated at {output}")


if __name__ == "__main__":
    cli()

import json
from contextlib import nullcontext
from functools import wraps
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import click
from rich.console import Console
from rich.traceback import install

from depthkit.config import AppConfig, ConfigBuilder, load_config
from depthkit.depthmap import (
    asai_lift,
    automorphic_induction,
    conductor_from_depth,
    depth_shapiro,
    depth_weil_restriction,
    llc_depth,
)
from depthkit.errors import DepthkitError, error_payload
from depthkit.exactnum import format_rational, to_rational
from depthkit.ramification import build_phi, build_psi, upper_jumps
from depthkit.reports import ReportWriter, VerificationReport, render_report
from depthkit.spec_parser import format_spec, parse_spec
from depthkit.suites import SUITE_NAMES, SUITES, laurent_cases, run_all, run_suite
from depthkit.utils.logging import setup_logging
from depthkit.utils.progress import create_progress

EXIT_FAILED = 1
EXIT_ERROR = 2

TOWER_HELP = (
    "Extension spec, base field first: 'tame(2) * as(p=2, m=3)' is a tame "
    "quadratic E/F under an Artin-Schreier L/E, and psi_{L/F} = psi_{L/E} o psi_{E/F}."
)

# Install rich traceback handler
install()
console = Console()
err_console = Console(stderr=True)


def handle_errors(f):
    """Print library errors as 'Error [CODE]: message' and exit 2"""
    @wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except DepthkitError as e:
            ctx = click.get_current_context()
            if ctx.params.get("as_json"):
                click.echo(json.dumps({"error": error_payload(e)}, indent=2))
            else:
                err_console.print(f"Error [{e.code}]: {e}", style="red", markup=False, highlight=False, soft_wrap=True)
            ctx.exit(EXIT_ERROR)
    return wrapper


def _parse_rational(ctx, param, value):
    if value is None:
        return None
    try:
        return to_rational(value)
    except DepthkitError as e:
        raise click.BadParameter(str(e)) from e


def _app_config(ctx: click.Context, **overrides: Any) -> AppConfig:
    """Config from the group options plus per-command overrides"""
    options = ctx.find_root().obj or {}
    cli_args = {**options.get("cli_args", {}), **{k: v for k, v in overrides.items() if v is not None}}
    app_config = load_config(
        yaml_path=options.get("config_path"),
        env_path=options.get("env_path"),
        cli_args=cli_args,
    )
    setup_logging(
        level=app_config.logging.level,
        log_file=app_config.logging.file,
        verbose=options.get("verbose", False),
    )
    return app_config


def _emit_json(payload: Dict[str, Any]) -> None:
    click.echo(json.dumps(payload, indent=2))


@click.group()
@click.version_option(package_name="depthkit")
@click.option(
    "-c", "--config",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Path to YAML config file"
)
@click.option(
    "-e", "--env",
    type=click.Path(path_type=Path),
    help="Path to .env file"
)
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
    help="Logging level"
)
@click.option(
    "--log-file",
    type=click.Path(path_type=Path),
    help="Log file path"
)
@click.option(
    "-v", "--verbose",
    is_flag=True,
    help="Debug logging"
)
@click.pass_context
def cli(ctx, config: Optional[Path], env: Optional[Path], log_level: Optional[str], log_file: Optional[Path], verbose: bool):
    """Exact Hasse-Herbrand functions, depth maps and verification batteries.

    Extension towers are written base first and compose left to right:
    "tame(2) * as(p=2, m=3)" means F < E < L with psi_{L/F} = psi_{L/E} o psi_{E/F}.
    """
    ctx.obj = {
        "config_path": config,
        "env_path": env,
        "verbose": verbose,
        "cli_args": {
            "log_level": log_level,
            "log_file": str(log_file) if log_file else None,
        },
    }


@cli.command()
@click.option("--ext", "ext_spec", required=True, help=TOWER_HELP)
@click.option("--fn", type=click.Choice(["phi", "psi"]), required=True, help="Herbrand function to show")
@click.option("--eval", "eval_at", callback=_parse_rational, help="Evaluate at a rational x >= 0, e.g. 3/2")
@click.option("--jumps", is_flag=True, help="Also list the upper ramification jumps")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON")
@click.pass_context
@handle_errors
def hh(ctx, ext_spec: str, fn: str, eval_at, jumps: bool, as_json: bool):
    """Hasse-Herbrand function phi or psi of an extension"""
    _app_config(ctx)
    spec = parse_spec(ext_spec)
    extension = spec.to_extension()
    plf = build_phi(extension) if fn == "phi" else build_psi(extension)
    value = plf(eval_at) if eval_at is not None else None
    jump_list = upper_jumps(extension) if jumps else None

    if as_json:
        payload: Dict[str, Any] = {"extension": format_spec(spec), "fn": fn, "function": plf.to_json_dict()}
        if value is not None:
            payload["x"] = format_rational(eval_at)
            payload["value"] = format_rational(value)
        if jump_list is not None:
            payload["upper_jumps"] = [format_rational(j) for j in jump_list]
        _emit_json(payload)
        return

    if value is not None:
        click.echo(format_rational(value))
    else:
        click.echo(f"{fn}_{{{format_spec(spec)}}}:")
        for line in plf.describe():
            click.echo(f"  {line}")
    if jump_list is not None:
        click.echo(f"upper jumps: {', '.join(format_rational(j) for j in jump_list) or 'none'}")


@cli.command()
@click.option("--ext", "ext_spec", required=True, help=TOWER_HELP)
@click.option("--dep", "depth", required=True, callback=_parse_rational, help="Depth d >= 0")
@click.option("--kappa", default="1", callback=_parse_rational, help="Depth-change factor of the base correspondence")
@click.option("--llc", "operation", flag_value="llc", help="phi_{E/F}(kappa e d)")
@click.option("--shapiro", "operation", flag_value="shapiro", help="psi_{E/F}(d)")
@click.option("--restrict", "operation", flag_value="restrict", help="e d")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON")
@click.pass_context
@handle_errors
def depth(ctx, ext_spec: str, depth, kappa, operation: Optional[str], as_json: bool):
    """Depth after Weil restriction, Shapiro or the induced local correspondence"""
    if operation is None:
        raise click.UsageError("one of --llc, --shapiro, --restrict is required")
    _app_config(ctx)
    spec = parse_spec(ext_spec)
    extension = spec.to_extension()
    if operation == "llc":
        result = llc_depth(depth, extension, kappa)
    elif operation == "shapiro":
        result = depth_shapiro(depth, extension)
    else:
        result = depth_weil_restriction(depth, extension)

    if as_json:
        _emit_json({
            "extension": format_spec(spec),
            "operation": operation,
            "depth": format_rational(depth),
            "kappa": format_rational(kappa),
            "result": format_rational(result),
        })
    else:
        click.echo(format_rational(result))


@cli.command()
@click.option("--n", "n", type=int, required=True, help="Rank n of GL_n")
@click.option("--dep", "depth", required=True, callback=_parse_rational, help="Depth of the representation")
@click.option("--asai", is_flag=True, help="Also give the Asai lift to GL_{n^2}(F); needs --ext")
@click.option("--ai", is_flag=True, help="Also give the automorphic induction to GL_{n[E:F]}(F); needs --ext")
@click.option("--ext", "ext_spec", help=TOWER_HELP)
@click.option("--json", "as_json", is_flag=True, help="Emit JSON")
@click.pass_context
@handle_errors
def conductor(ctx, n: int, depth, asai: bool, ai: bool, ext_spec: Optional[str], as_json: bool):
    """Conductor and Swan exponent of an essentially square-integrable representation"""
    if (asai or ai) and not ext_spec:
        raise click.UsageError("--asai and --ai need --ext")
    _app_config(ctx)
    results: Dict[str, Any] = {}
    if n >= 2 or not (asai or ai):
        results["base"] = conductor_from_depth(n, depth)
    if ext_spec:
        spec = parse_spec(ext_spec)
        extension = spec.to_extension()
        if asai:
            results["asai"] = asai_lift(n, extension, depth)
        if ai:
            results["ai"] = automorphic_induction(n, extension, depth)

    if as_json:
        _emit_json({name: data.to_json_dict() for name, data in results.items()})
        return
    for name, data in results.items():
        prefix = "" if name == "base" else f"{name}: "
        click.echo(
            f"{prefix}n = {data.n}, f = {data.conductor}, swan = {format_rational(data.swan)}, "
            f"depth = {format_rational(data.depth)}"
        )


@cli.command()
@click.argument("suite", type=click.Choice([*SUITE_NAMES, "all"]))
@click.option("--p", "primes", type=int, multiple=True, help="Residue characteristic(s) for the laurent suite")
@click.option("--m", "breaks", type=int, multiple=True, help="Artin-Schreier break(s) for the laurent suite")
@click.option("--prec", "precision", type=int, help="Series precision (default from DEPTHKIT_PRECISION or 256)")
@click.option("--trials", type=int, help="Random trials per norm probe")
@click.option("--seed", type=int, help="Random seed")
@click.option("-j", "--jobs", type=int, help="Worker threads")
@click.option("--budget", type=int, help="Cocycle enumeration budget")
@click.option("--max-induced-order", type=int, help="Largest induced module to build")
@click.option("--report", "report_path", type=click.Path(dir_okay=False, path_type=Path), help="Write a YAML report")
@click.option("--failures-only", is_flag=True, help="Only list failed cases")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON")
@click.pass_context
@handle_errors
def verify(
    ctx,
    suite: str,
    primes: Tuple[int, ...],
    breaks: Tuple[int, ...],
    precision: Optional[int],
    trials: Optional[int],
    seed: Optional[int],
    jobs: Optional[int],
    budget: Optional[int],
    max_induced_order: Optional[int],
    report_path: Optional[Path],
    failures_only: bool,
    as_json: bool,
):
    """Run a property suite; exit code 0 iff every case passes"""
    app_config = _app_config(
        ctx,
        precision=precision,
        trials=trials,
        seed=seed,
        jobs=jobs,
        budget=budget,
        max_induced_order=max_induced_order,
        output_format="json" if as_json else None,
    )
    as_json = app_config.output.format == "json"
    if (primes or breaks) and suite != "laurent":
        raise click.UsageError("--p and --m only apply to the laurent suite")

    if suite == "all":
        batches = {name: list(SUITES[name](app_config)) for name in SUITE_NAMES}
    elif suite == "laurent" and (primes or breaks):
        kwargs = {}
        if primes:
            kwargs["primes"] = primes
        if breaks:
            kwargs["breaks"] = breaks
        batches = {suite: list(laurent_cases(app_config, **kwargs))}
    else:
        batches = {suite: list(SUITES[suite](app_config))}
    total = sum(len(cases) for cases in batches.values())
    if not total:
        raise click.UsageError("no cases selected")

    show_progress = not as_json and err_console.is_terminal
    progress = create_progress(err_console) if show_progress else nullcontext()
    with progress:
        task = progress.add_task(f"verify {suite}", total=total) if show_progress else None

        def advance(_case) -> None:
            if task is not None:
                progress.advance(task)

        if suite == "all":
            report = run_all(app_config, batches=batches, on_done=advance)
        else:
            report = run_suite(suite, app_config, cases=batches[suite], on_done=advance)

    _show_report(report, as_json, failures_only)
    if report_path:
        ReportWriter(report_path).save(report, config=app_config.model_dump())
        if not as_json:
            console.print(f"[blue]Report saved to {report_path}[/blue]")
    if not report.passed:
        ctx.exit(EXIT_FAILED)


def _show_report(report: VerificationReport, as_json: bool, failures_only: bool) -> None:
    if as_json:
        _emit_json(report.to_json_dict())
    else:
        render_report(console, report, failures_only=failures_only)


@cli.command()
@click.option(
    "--format",
    type=click.Choice(["env", "yaml"]),
    required=True,
    help="Output format for configuration"
)
@click.option(
    "-o", "--output",
    type=click.Path(path_type=Path),
    required=True,
    help="Output path for configuration file"
)
@click.option("--precision", type=int, help="Laurent series precision")
@click.option("--trials", type=int, help="Random trials per norm probe")
@click.option("--seed", type=int, help="Random seed")
@click.option("--budget", type=int, help="Cocycle enumeration budget")
@click.option("--max-induced-order", type=int, help="Largest induced module to build")
@click.option("--jobs", type=int, help="Worker threads")
@click.option("--output-format", type=click.Choice(["text", "json"]), help="Default output format")
@click.pass_context
@handle_errors
def config(ctx, format: str, output: Path, **overrides: Any):
    """Write the effective configuration as YAML or .env"""
    options = ctx.find_root().obj or {}
    builder = ConfigBuilder()
    if options.get("config_path"):
        builder.load_yaml(options["config_path"])
    builder.load_env(options.get("env_path"))
    builder.update_from_cli({**options.get("cli_args", {}), **overrides})

    output.parent.mkdir(parents=True, exist_ok=True)
    if format == "env":
        builder.export_env(output)
        console.print(f"[green]Environment configuration exported to {output}[/green]")
    else:
        builder.export_yaml(output)
        console.print(f"[green]YAML configuration exported to {output}[/green]")


if __name__ == "__main__":
    cli()

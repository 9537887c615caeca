"""CLI commands for building, verifying and certifying experiments."""

from importlib.resources import files
from pathlib import Path

import typer
from pydantic import ValidationError
from rich import print

from coblab.errors import ComplexityGuard
from coblab.experiment.run import Experiment, ExperimentBuilder, render_report
from coblab.utils import logger

ConfigOption = typer.Option(
    ...,
    "--config",
    "-c",
    help="Path to the experiment config (YAML or JSON)",
    exists=True,
    file_okay=True,
    dir_okay=False,
    readable=True,
)
OutOption = typer.Option(None, "--out", "-o", help="Output directory (overrides config.output)")
SeedlessOption = typer.Option(
    True, "--seedless/--no-seedless", help="Deterministic sampling; no RNG is used anywhere"
)


def _load(config: Path, out: Path | None, seedless: bool) -> Experiment:
    if not seedless:
        logger.warning("--no-seedless has no effect: every sample is a Halton point")
    print(f"[bold blue]Loading configuration from:[/bold blue] {config}")
    return ExperimentBuilder().from_file(config).with_output(out).build()


def _fail(e: Exception, label: str = "Error") -> None:
    print(f"[bold red]{label}:[/bold red] {e}")
    raise typer.Exit(1)


def build(config: Path = ConfigOption, out: Path = OutOption, seedless: bool = SeedlessOption):
    """
    Build the subsequence, the coboundary chain(s) and the system spec.

    Example:
        cbl build -c experiment.yaml
    """
    try:
        experiment = _load(config, out, seedless)
        summary = experiment.build()
        print("[bold green]✓ Build complete[/bold green]")
        for row in summary:
            print(
                f"  alpha={row['alpha']:.12f}  r0={row['r0']}  eps={row['eps']}  entries={row['entries']}"
            )
            print(
                f"  sum|f_n|={row['abs_sum_f']:.6f}  "
                f"|G_i|_2=[{', '.join(f'{v:.6f}' for v in row['l2_G'])}]  "
                f"coefficient residual={row['coefficient_residual']:.3e}"
            )
        print(f"  Output: {experiment.out_dir}")
    except FileNotFoundError as e:
        _fail(e)
    except (ValueError, ValidationError) as e:
        _fail(e, "Configuration Error")
    except Exception as e:
        logger.exception("Failed to build experiment")
        _fail(e)


def verify(config: Path = ConfigOption, out: Path = OutOption, seedless: bool = SeedlessOption):
    """
    Run the selected probes; exit nonzero iff an identity check fails.

    Example:
        cbl verify -c experiment.yaml
    """
    try:
        experiment = _load(config, out, seedless)
        checks = experiment.verify()
    except FileNotFoundError as e:
        _fail(e)
    except (ValueError, ValidationError) as e:
        _fail(e, "Configuration Error")
    except Exception as e:
        logger.exception("Failed to verify experiment")
        _fail(e)

    for check in checks:
        colour = "green" if check.passed else ("red" if check.kind == "identity" else "yellow")
        print(f"  [{colour}]{check}[/{colour}]")
    failed = experiment.failed
    if failed:
        print(f"[bold red]✗ {len(failed)} identity check(s) failed[/bold red]")
        raise typer.Exit(1)
    print(f"[bold green]✓ {len(checks)} check(s), no identity failures[/bold green]")


def rpk(config: Path = ConfigOption, out: Path = OutOption, seedless: bool = SeedlessOption):
    """
    Certify regional proximality for the configured pairs.

    Example:
        cbl rpk -c experiment.yaml
    """
    try:
        experiment = _load(config, out, seedless)
        data = experiment.certify()
    except ComplexityGuard as e:
        _fail(e, "Complexity Guard")
    except FileNotFoundError as e:
        _fail(e)
    except (ValueError, ValidationError) as e:
        _fail(e, "Configuration Error")
    except Exception as e:
        logger.exception("Failed to certify pairs")
        _fail(e)

    found = sum(1 for r in data["results"] if r["kind"] == "certificate")
    print(f"[bold green]✓ {found}/{len(data['results'])} pair(s) certified[/bold green]")
    if data["finite"] is not None:
        print(f"  finite system: {len(data['finite']['pairs'])} related pair(s)")


def report(out: Path = typer.Option("out", "--out", "-o", help="Directory holding report.json")):
    """
    Render report.md from report.json and certificates.json.

    Example:
        cbl report -o out
    """
    try:
        path = render_report(out)
    except FileNotFoundError as e:
        _fail(e)
    except (ValueError, ValidationError) as e:
        _fail(e)
    except Exception as e:
        logger.exception("Failed to render report")
        _fail(e)
    print(f"[bold green]✓ Created:[/bold green] {path}")


def init(
    output: Path = typer.Option(
        "experiment.yaml",
        "--output",
        "-o",
        help="Output path for the configuration template",
    ),
):
    """
    Generate a sample experiment configuration.

    Example:
        cbl init
        cbl init -o golden.yaml
    """
    if output.exists():
        if not typer.confirm(f"File '{output}' already exists. Overwrite?"):
            print("[yellow]Operation cancelled[/yellow]")
            raise typer.Exit(0)

    output.write_text(files("coblab.experiment").joinpath("example.yaml").read_text())

    print(f"[bold green]✓ Created:[/bold green] {output}")
    print(f"\n  1. Edit {output}")
    print(f"  2. cbl build -c {output}")
    print(f"  3. cbl verify -c {output}")
    print(f"  4. cbl rpk -c {output} && cbl report")

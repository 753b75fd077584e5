"""
Shared plumbing for the ym2d commands: logging setup, handler dispatch,
exit codes, and report rendering.

Reports go to stdout (or ``--output``); the rich check table and messages go
to stderr so stdout stays machine-readable.
"""

import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import typer
from loguru import logger
from rich.console import Console
from rich.table import Table

from ..core.errors import InvalidParameterError, Ym2dError
from ..tools.reports import Report

console = Console(stderr=True)

FORMATS = ("json", "csv")


def format_option():
    return typer.Option("json", "--format", "-f", help="Report format: json or csv")


def output_option():
    return typer.Option(None, "--output", "-o", help="Write the report to this file")


def verbose_option():
    return typer.Option(False, "--verbose", "-v", help="Debug logging on stderr")


def group_option():
    return typer.Option("SU2", "--group", "-g", help="Gauge group: SU2 or U1")


def metric_scale_option():
    return typer.Option(1.0, "--metric-scale", help="c² in the ad-invariant metric")


def configure_logging(verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "WARNING")


def compact(**arguments: Any) -> Dict[str, Any]:
    """Drop unset options so handlers fall back to their defaults."""
    return {k: v for k, v in arguments.items() if v is not None}


def checks_table(report: Report) -> Table:
    table = Table(title=f"{report.command} checks")
    table.add_column("Check", style="cyan")
    table.add_column("Engines")
    table.add_column("Deviation", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("Status")
    for check in report.checks:
        status = "[green]✓ pass[/green]" if check.passed else "[red]✗ fail[/red]"
        table.add_row(check.name, " vs ".join(check.engines), f"{check.deviation:.3e}",
                      f"{check.tolerance:.3e}", status)
    return table


def run(
    handler: Callable[[Dict[str, Any]], Report],
    arguments: Dict[str, Any],
    fmt: str,
    output: Optional[Path],
    verbose: bool,
) -> None:
    """
    Call a handler and emit its report.

    Exit codes: 2 for invalid input, 1 for a computational error or a failed
    check, 0 otherwise.
    """
    configure_logging(verbose)
    if fmt not in FORMATS:
        console.print(f"[red]Error: unknown format {fmt!r} (choose json or csv)[/red]")
        raise typer.Exit(2)

    try:
        report = handler(arguments)
    except (InvalidParameterError, FileNotFoundError, json.JSONDecodeError) as e:
        console.print(f"[red]Error: {e}[/red]")
        raise typer.Exit(2)
    except Ym2dError as e:
        logger.error(f"{report_name(handler)} failed: {e}")
        typer.echo(json.dumps(e.to_dict(), default=str))
        raise typer.Exit(1)

    if output is not None:
        path = report.write(output, fmt)
        console.print(f"[green]✓ Report written to {path}[/green]")
    elif fmt == "csv":
        typer.echo(report.to_csv(), nl=False)
    else:
        typer.echo(report.to_json())

    if report.checks:
        console.print(checks_table(report))
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        console.print(f"[red]✗ {len(failed)} check(s) failed: {', '.join(failed)}[/red]")
        raise typer.Exit(1)


def report_name(handler: Callable) -> str:
    return handler.__name__.replace("handle_", "").replace("_", "-")

#!/usr/bin/env python3
"""
ym2d CLI
========

Command-line interface for two-dimensional Yang-Mills Wilson loops. Every
command calls one handler, prints a versioned report and exits non-zero when a
cross-engine check fails.

Features:
- Irreps, heat kernel values and partition functions
- Wilson loops through the exact, Monte Carlo, asymptotic and perturbative engines
- Non-commuting limits and instanton-gap reports
- Lie-factor identities and the Wick/Berezin engine

Dependencies:
- typer: CLI framework (https://typer.tiangolo.com/)
- rich: Terminal formatting (https://rich.readthedocs.io/)
- loguru: stderr logging

Sample Input:
    ym2d irreps --group U1 --cutoff 0
    ym2d wilson exact --group SU2 --irrep 2 --lambda 0.1 --areas 0.5,0.5
    ym2d compare-limits --m 2 --order 3

Expected Output:
    {"schema": "ym2d/1", "command": ..., "inputs": ..., "results": ..., "checks": [...], "passed": true}
"""

from pathlib import Path
from typing import Optional

import typer

from ..tools import (
    handle_compare_limits,
    handle_heat_kernel,
    handle_instanton_gap,
    handle_irreps,
    handle_lie_identities,
    handle_partition,
    handle_wick_demo,
)
from .output import (
    compact,
    format_option,
    group_option,
    metric_scale_option,
    output_option,
    run,
    verbose_option,
)
from .wilson_commands import app as wilson_app

app = typer.Typer(
    name="ym2d",
    help="ym2d - Wilson loops in two-dimensional Yang-Mills theory",
    rich_markup_mode="rich"
)

app.add_typer(wilson_app, name="wilson", help="Wilson loop expectations: exact, r2, mc, asymptotic, pert")


# ============================================
# GROUPS AND HEAT KERNELS
# ============================================

@app.command()
def irreps(
    group: str = group_option(),
    metric_scale: float = metric_scale_option(),
    cutoff: float = typer.Option(10.0, "--cutoff", "-c", help="Largest Casimir to list"),
    fmt: str = format_option(),
    output: Optional[Path] = output_option(),
    verbose: bool = verbose_option(),
):
    """List irreducible representations with Casimir below the cutoff."""
    run(handle_irreps, compact(group=group, metric_scale=metric_scale, cutoff=cutoff), fmt, output, verbose)


@app.command(name="heat-kernel")
def heat_kernel(
    group: str = group_option(),
    metric_scale: float = metric_scale_option(),
    t: float = typer.Option(..., "--t", "-t", help="Diffusion time t > 0"),
    theta: str = typer.Option("0.0", "--theta", help="Comma-separated torus angles"),
    truncation: str = typer.Option("auto", "--truncation", help="auto, casimir:<c> or winding:<k>"),
    fmt: str = format_option(),
    output: Optional[Path] = output_option(),
    verbose: bool = verbose_option(),
):
    """Heat kernel K_t at torus angles, character sum vs geodesic sum."""
    arguments = compact(group=group, metric_scale=metric_scale, t=t, theta=theta, truncation=truncation)
    run(handle_heat_kernel, arguments, fmt, output, verbose)


@app.command()
def partition(
    group: str = group_option(),
    metric_scale: float = metric_scale_option(),
    genus: int = typer.Option(0, "--genus", help="Genus h of the closed surface"),
    lam: float = typer.Option(..., "--lambda", "-l", help="Total coupling λ (λ₀ when --map is given)"),
    surface: Optional[Path] = typer.Option(None, "--map", "-m", help="SurfaceMap JSON file"),
    fmt: str = format_option(),
    output: Optional[Path] = output_option(),
    verbose: bool = verbose_option(),
):
    """Partition function of a closed genus-h surface."""
    arguments = compact(group=group, metric_scale=metric_scale, genus=genus, map=surface, **{"lambda": lam})
    run(handle_partition, arguments, fmt, output, verbose)


@app.command(name="lie-identities")
def lie_identities(
    group: str = group_option(),
    metric_scale: float = metric_scale_option(),
    tolerance: float = typer.Option(1e-12, "--tolerance", help="Allowed deviation"),
    fmt: str = format_option(),
    output: Optional[Path] = output_option(),
    verbose: bool = verbose_option(),
):
    """Lie-factor identities of the second-order diagrams."""
    arguments = compact(group=group, metric_scale=metric_scale, tolerance=tolerance)
    run(handle_lie_identities, arguments, fmt, output, verbose)


# ============================================
# ASYMPTOTIC COMPARISONS
# ============================================

@app.command(name="compare-limits")
def compare_limits(
    group: str = group_option(),
    metric_scale: float = metric_scale_option(),
    m: int = typer.Option(2, "--m", help="Irrep label of the character χ_m"),
    order: int = typer.Option(3, "--order", "-n", help="Series order (>= 2)"),
    fmt: str = format_option(),
    output: Optional[Path] = output_option(),
    verbose: bool = verbose_option(),
):
    """Decompactify-then-expand vs expand-then-decompactify."""
    arguments = compact(group=group, metric_scale=metric_scale, m=m, order=order)
    run(handle_compare_limits, arguments, fmt, output, verbose)


@app.command(name="instanton-gap")
def instanton_gap(
    group: str = group_option(),
    metric_scale: float = metric_scale_option(),
    irrep: Optional[int] = typer.Option(None, "--irrep", "-r", help="Irrep label of the observable"),
    observable: Optional[str] = typer.Option(None, "--observable", help="label:coeff pairs"),
    lam: float = typer.Option(..., "--lambda", "-l", help="Total coupling λ on the unit sphere"),
    fraction: Optional[float] = typer.Option(None, "--fraction", help="|R₁|/|S²|; default equal areas"),
    stability: float = typer.Option(0.2, "--stability", help="Allowed relative spread of pair slopes"),
    fmt: str = format_option(),
    output: Optional[Path] = output_option(),
    verbose: bool = verbose_option(),
):
    """Exponentially small gap between the exact and Gaussian Wilson loop."""
    arguments = compact(group=group, metric_scale=metric_scale, irrep=irrep, observable=observable,
                        fraction=fraction, stability=stability, **{"lambda": lam})
    run(handle_instanton_gap, arguments, fmt, output, verbose)


# ============================================
# WICK ENGINE
# ============================================

@app.command(name="wick-demo")
def wick_demo(
    input_file: Path = typer.Argument(..., help="JSON with generators, monomial, pairing (and optional berezin/pfaffian)"),
    fmt: str = format_option(),
    output: Optional[Path] = output_option(),
    verbose: bool = verbose_option(),
):
    """Wick expectation of a monomial, cross-checked against the matching sum."""
    run(handle_wick_demo, {"input": str(input_file)}, fmt, output, verbose)


if __name__ == "__main__":
    app()

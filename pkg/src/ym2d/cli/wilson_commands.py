"""
Wilson loop CLI commands for ym2d.

Purpose:
    The ``wilson`` sub-app: one command per engine, each writing a comparison
    report against an independent engine.

Sample input:
    ym2d wilson exact --group SU2 --irrep 2 --lambda 0.1 --areas 0.5,0.5
    ym2d wilson mc --lambda 0.5 --areas 0.5,0.5 --samples 100000 --subdivide 1
    ym2d wilson pert --irrep 2 --loop ellipse --a 1.5 --b 0.5 --order 2

Expected output:
    JSON report on stdout (or --output), check table on stderr
"""

from pathlib import Path
from typing import Optional

import typer

from ..tools import (
    handle_wilson_asymptotic,
    handle_wilson_exact,
    handle_wilson_mc,
    handle_wilson_pert,
    handle_wilson_r2,
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

app = typer.Typer(
    name="wilson",
    help="Wilson loop expectations: exact, r2, mc, asymptotic, pert",
    rich_markup_mode="rich"
)

IRREP_HELP = "Irrep label (SU2: dimension m >= 1, U1: charge n)"
OBSERVABLE_HELP = "Class function as label:coeff pairs, e.g. '2:1,4:-0.5'"


@app.command()
def exact(
    group: str = group_option(),
    metric_scale: float = metric_scale_option(),
    irrep: Optional[int] = typer.Option(None, "--irrep", "-r", help=IRREP_HELP),
    observable: Optional[str] = typer.Option(None, "--observable", help=OBSERVABLE_HELP),
    lam: float = typer.Option(..., "--lambda", "-l", help="Coupling λ₀"),
    areas: str = typer.Option("0.5,0.5", "--areas", "-a", help="Region areas |R₁|,|R₂| on S²"),
    fmt: str = format_option(),
    output: Optional[Path] = output_option(),
    verbose: bool = verbose_option(),
):
    """Exact simple-loop expectation on S² (quadrature and fusion) with its Gaussian reference."""
    arguments = compact(group=group, metric_scale=metric_scale, irrep=irrep, observable=observable,
                        areas=areas, **{"lambda": lam})
    run(handle_wilson_exact, arguments, fmt, output, verbose)


@app.command()
def r2(
    group: str = group_option(),
    metric_scale: float = metric_scale_option(),
    irrep: Optional[int] = typer.Option(None, "--irrep", "-r", help=IRREP_HELP),
    observable: Optional[str] = typer.Option(None, "--observable", help=OBSERVABLE_HELP),
    lam: float = typer.Option(..., "--lambda", "-l", help="Coupling λ₀"),
    area: float = typer.Option(1.0, "--area", help="Enclosed area |R|"),
    order: int = typer.Option(12, "--order", "-n", help="Taylor order of the cross-check series"),
    fmt: str = format_option(),
    output: Optional[Path] = output_option(),
    verbose: bool = verbose_option(),
):
    """Decompactified (plane) Wilson loop dim·e^{-λ₀|R|c₂/2}."""
    arguments = compact(group=group, metric_scale=metric_scale, irrep=irrep, observable=observable,
                        area=area, order=order, **{"lambda": lam})
    run(handle_wilson_r2, arguments, fmt, output, verbose)


@app.command()
def mc(
    group: str = group_option(),
    metric_scale: float = metric_scale_option(),
    irrep: Optional[int] = typer.Option(None, "--irrep", "-r", help=IRREP_HELP),
    observable: Optional[str] = typer.Option(None, "--observable", help=OBSERVABLE_HELP),
    lam: float = typer.Option(..., "--lambda", "-l", help="Coupling λ₀"),
    surface: str = typer.Option("sphere", "--map", "-m", help="sphere, torus, or a SurfaceMap JSON file"),
    areas: str = typer.Option("0.5,0.5", "--areas", "-a", help="Region areas for the sphere map"),
    area: float = typer.Option(1.0, "--area", help="Face area for the torus map"),
    subdivide: int = typer.Option(0, "--subdivide", help="Halve the largest face this many times"),
    loop: Optional[str] = typer.Option(None, "--loop", help="Loop name on the map"),
    samples: int = typer.Option(100_000, "--samples", "-s", help="Number of samples"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Root seed (default from settings)"),
    workers: Optional[int] = typer.Option(None, "--workers", "-w", help="Sampling threads"),
    fmt: str = format_option(),
    output: Optional[Path] = output_option(),
    verbose: bool = verbose_option(),
):
    """Importance-sampled lattice expectation on a surface map."""
    arguments = compact(group=group, metric_scale=metric_scale, irrep=irrep, observable=observable,
                        map=surface, areas=areas, area=area, subdivide=subdivide, loop=loop,
                        samples=samples, seed=seed, workers=workers, **{"lambda": lam})
    run(handle_wilson_mc, arguments, fmt, output, verbose)


@app.command()
def asymptotic(
    group: str = group_option(),
    metric_scale: float = metric_scale_option(),
    irrep: Optional[int] = typer.Option(None, "--irrep", "-r", help=IRREP_HELP),
    observable: Optional[str] = typer.Option(None, "--observable", help=OBSERVABLE_HELP),
    rho: Optional[str] = typer.Option(None, "--rho", help="Comma-separated ρ values"),
    lam: Optional[float] = typer.Option(None, "--lambda", "-l", help="Total coupling λ (with --areas)"),
    areas: str = typer.Option("0.5,0.5", "--areas", "-a", help="Region areas, used with --lambda"),
    order: int = typer.Option(3, "--order", "-n", help="Order of the ρ-series"),
    fmt: str = format_option(),
    output: Optional[Path] = output_option(),
    verbose: bool = verbose_option(),
):
    """Gaussian Lie-algebra expectation, its closed form and ρ-series."""
    arguments = compact(group=group, metric_scale=metric_scale, irrep=irrep, observable=observable,
                        rho=rho, areas=areas, order=order, **{"lambda": lam})
    run(handle_wilson_asymptotic, arguments, fmt, output, verbose)


@app.command()
def pert(
    group: str = group_option(),
    metric_scale: float = metric_scale_option(),
    irrep: Optional[int] = typer.Option(None, "--irrep", "-r", help=IRREP_HELP),
    loop: str = typer.Option("circle", "--loop", help="circle or ellipse"),
    radius: float = typer.Option(1.0, "--radius", help="Circle radius"),
    a: float = typer.Option(1.0, "--a", help="Ellipse semi-axis along x"),
    b: float = typer.Option(0.5, "--b", help="Ellipse semi-axis along y"),
    order: int = typer.Option(2, "--order", "-n", help="Highest λ₀ order (0..3)"),
    nodes: Optional[int] = typer.Option(None, "--nodes", help="Gauss–Legendre nodes per axis"),
    qmc_log2: Optional[int] = typer.Option(None, "--qmc-log2", help="log2 Sobol points per replicate (order 3)"),
    tolerance: float = typer.Option(1e-4, "--tolerance", help="Agreement tolerance for orders 0..2"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Sobol scrambling seed"),
    fmt: str = format_option(),
    output: Optional[Path] = output_option(),
    verbose: bool = verbose_option(),
):
    """Holomorphic-gauge perturbative coefficients against the asymptotic series."""
    arguments = compact(group=group, metric_scale=metric_scale, irrep=irrep, loop=loop, radius=radius,
                        a=a, b=b, order=order, nodes=nodes, qmc_log2=qmc_log2, tolerance=tolerance, seed=seed)
    run(handle_wilson_pert, arguments, fmt, output, verbose)

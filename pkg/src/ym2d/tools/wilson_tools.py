"""
Wilson Loop Commands
====================

Handlers behind the ``wilson`` sub-commands. Every handler computes its main
value with one engine and cross-checks it against an independent one:

- exact:      Weyl quadrature vs fusion double sum, plus the Gaussian reference
- r2:         closed form vs the Taylor series in a = λ₀|R|
- mc:         importance sampling vs the exact sphere value and vs Z
- asymptotic: Gauss–Hermite quadrature vs the closed form, series remainder
- pert:       holomorphic-gauge quadrature vs the asymptotic series

Dependencies:
- loguru: handler entry logging

Sample Input:
    handle_wilson_exact({"group": "SU2", "irrep": 2, "lambda": 0.1, "areas": "0.5,0.5"})

Expected Output:
    Report whose results hold the exact value, the fusion value and the
    asymptotic reference, with passed == True
"""

import math
from typing import Any, Dict, List

from loguru import logger

from ..core.asymptotics import (
    MAX_SERIES_ORDER,
    asymptotic_series,
    decompactified_series,
    gaussian_closed_form,
    gaussian_lie_expectation,
    growth_bound,
    remainder_check,
    sphere_rho,
)
from ..core.errors import InvalidParameterError
from ..core.lattice import (
    graph_expectation_mc,
    partition_function,
    wilson_exact_plane,
    wilson_exact_simple,
)
from ..core.liegroup import GroupModel
from ..core.pertloop import Circle, ContourLoop, MatrixRep, PolyParam, decompactified_comparison
from ..core.surface import LoopConfig, SurfaceMap, sphere_one_edge, subdivide, torus_one_face
from .arguments import as_float, as_float_list, as_int, parse_group, parse_observable
from .reports import Report, measured

FUSION_TOL = 1e-8
CLOSED_FORM_TOL = 1e-8
MC_SIGMAS = 3.0


def _two_areas(arguments: Dict[str, Any]) -> List[float]:
    areas = as_float_list(arguments, "areas")
    if len(areas) != 2 or any(not a > 0 for a in areas):
        raise InvalidParameterError("areas must be two positive numbers", areas=areas)
    return areas


def _instanton_tolerance(group: GroupModel, lam: float, value: float) -> float:
    """Envelope for the non-perturbative gap at total coupling λ, floored at quadrature accuracy."""
    return max(3.0 * math.exp(-math.pi**2 * group.metric_scale / lam), FUSION_TOL * max(1.0, abs(value)))


# ============================================
# EXACT ENGINES
# ============================================


def handle_wilson_exact(arguments: Dict[str, Any]) -> Report:
    """
    ⟨W_f⟩ for a simple loop on S² with region areas ``areas`` and coupling λ₀.

    λ = λ₀(|R₁| + |R₂|) is the total coupling; the Gaussian reference uses
    ρ = λ|R₁||R₂|/|S²|² and is asserted for λ <= 1, where the gap is
    exponentially small.
    """
    logger.info(f"wilson exact request received with arguments: {arguments}")
    group = parse_group(arguments)
    f = parse_observable(group, arguments)
    lam0 = as_float(arguments, "lambda", positive=True)
    a1, a2 = _two_areas(arguments)

    cfg = LoopConfig.sphere(a1, a2, f)
    lam = lam0 * cfg.total_area
    value = wilson_exact_simple(group, cfg, lam0)
    fusion = wilson_exact_simple(group, cfg, lam0, method="fusion")
    rho = sphere_rho(lam, a1, a2)
    reference = gaussian_lie_expectation(group, f, rho)
    gap_tol = _instanton_tolerance(group, lam, value)

    report = Report("wilson exact", inputs={**group.to_dict(), **cfg.to_dict(), "lambda0": lam0})
    report.results.update({
        "lambda": lam,
        "rho": rho.rho,
        "exact": measured(value, FUSION_TOL),
        "fusion": measured(fusion, FUSION_TOL),
        "asymptotic_reference": measured(reference, gap_tol, kind="instanton_envelope"),
        "gap": abs(value - reference),
    })
    report.add_check("quadrature_vs_fusion", ("weyl_quadrature", "fusion_sum"), value, fusion,
                     FUSION_TOL * max(1.0, abs(value)))
    if lam <= 1.0:
        report.add_check("exact_vs_asymptotic", ("wilson_exact_simple", "gaussian_lie_expectation"),
                         value, reference, gap_tol, note="exponentially small gap for lambda <= 1")
    for engine, v, err in (("quadrature", value, FUSION_TOL), ("fusion", fusion, FUSION_TOL),
                           ("asymptotic", reference, gap_tol)):
        report.add_row(engine, v, err, lam0=lam0, area1=a1, area2=a2)
    return report


def handle_wilson_r2(arguments: Dict[str, Any]) -> Report:
    """
    Decompactified ⟨W_f⟩ = Σ a_ρ dim(ρ) e^{-λ₀|R| c₂(ρ)/2} on the plane.

    The Taylor series in a = λ₀|R| through ``order`` is compared with the
    Lagrange remainder bound Σ|a_ρ| dim (a c₂/2)^{N+1} e^{a c₂/2} / (N+1)!.
    """
    logger.info(f"wilson r2 request received with arguments: {arguments}")
    group = parse_group(arguments)
    f = parse_observable(group, arguments)
    lam0 = as_float(arguments, "lambda", positive=True)
    area = as_float(arguments, "area", positive=True)
    order = as_int(arguments, "order", MAX_SERIES_ORDER)

    cfg = LoopConfig.plane(area, f)
    value = wilson_exact_plane(cfg, lam0)
    a = lam0 * area
    series = decompactified_series(group, f, order)
    partial = series.evaluate(a)
    bound = math.fsum(
        abs(coeff) * irrep.dim * (a * irrep.casimir / 2.0) ** (order + 1)
        * math.exp(a * irrep.casimir / 2.0) / math.factorial(order + 1)
        for irrep, coeff in f.terms
    )

    report = Report("wilson r2", inputs={**group.to_dict(), **cfg.to_dict(), "lambda0": lam0, "order": order})
    report.results.update({
        "a": a,
        "exact": measured(value, 0.0),
        "series": series.to_dict(),
        "series_value": measured(partial, bound, kind="remainder_bound"),
    })
    report.add_check("closed_form_vs_series", ("wilson_exact_r2", "decompactified_series"), value, partial,
                     bound + 1e-12 * max(1.0, abs(value)))
    report.add_row("closed_form", value, 0.0, lam0=lam0, area=area)
    report.add_row("series", partial, bound, lam0=lam0, area=area)
    return report


# ============================================
# MONTE CARLO
# ============================================


def _build_map(arguments: Dict[str, Any]):
    """Returns (map, sphere areas or None)."""
    kind = str(arguments.get("map", "sphere"))
    if kind == "sphere":
        areas = _two_areas(arguments)
        smap, exact_areas = sphere_one_edge(str(areas[0]), str(areas[1])), areas
    elif kind == "torus":
        smap, exact_areas = torus_one_face(str(as_float(arguments, "area", 1.0, positive=True))), None
    else:
        smap, exact_areas = SurfaceMap.from_json(kind), None

    for _ in range(as_int(arguments, "subdivide", 0)):
        # largest face first
        largest = max(range(len(smap.faces)), key=lambda i: smap.faces[i].area)
        smap = subdivide(smap, largest, ("1/2", "1/2"))
    return smap, exact_areas


def handle_wilson_mc(arguments: Dict[str, Any]) -> Report:
    """
    Importance-sampled ⟨W_f⟩ on a surface map.

    ``map`` is "sphere" (one edge, ``areas``), "torus" (one face, ``area``) or a
    JSON file. The estimate is compared with the exact sphere value, and the
    mean importance weight with the partition function, both within 3σ.
    """
    logger.info(f"wilson mc request received with arguments: {arguments}")
    group = parse_group(arguments)
    lam0 = as_float(arguments, "lambda", positive=True)
    smap, sphere_areas = _build_map(arguments)
    loop = arguments.get("loop") or ("gamma" if sphere_areas else None)
    f = parse_observable(group, arguments) if loop else None

    result = graph_expectation_mc(
        group, smap, lam0, loop=loop, observable=f,
        samples=as_int(arguments, "samples", 100_000),
        seed=arguments.get("seed"),
        workers=arguments.get("workers"),
    )

    report = Report("wilson mc", inputs={
        **group.to_dict(), "lambda0": lam0, "map": smap.to_dict(), "loop": loop,
        "observable": f.to_dict() if f else None, "samples": result.samples, "seed": result.seed,
    })
    report.results.update({
        "estimate": measured(result.estimate, result.stderr, kind="stderr"),
        "partition_estimate": measured(result.partition_estimate, result.partition_stderr, kind="stderr"),
        "ess": result.ess,
        "chunks": result.chunks,
        "gauge_fixed_edges": result.gauge_fixed_edges,
    })
    report.add_row("monte_carlo", result.estimate, result.stderr, lam0=lam0)

    z = partition_function(group, smap.genus, lam0 * float(smap.total_area))
    report.results["partition_function"] = z
    report.add_check("partition_vs_mean_weight", ("partition_function", "monte_carlo"),
                     z, result.partition_estimate, MC_SIGMAS * result.partition_stderr)

    if sphere_areas and f is not None:
        exact = wilson_exact_simple(group, LoopConfig.sphere(*sphere_areas, f), lam0)
        report.results["exact"] = measured(exact, FUSION_TOL)
        report.add_check("mc_vs_exact", ("wilson_exact_simple", "monte_carlo"),
                         exact, result.estimate, MC_SIGMAS * result.stderr)
        report.add_row("exact", exact, FUSION_TOL, lam0=lam0)
    return report


# ============================================
# ASYMPTOTICS AND PERTURBATION THEORY
# ============================================


def handle_wilson_asymptotic(arguments: Dict[str, Any]) -> Report:
    """
    Gaussian Lie-algebra expectation at each ρ, its closed form and ρ-series.

    ρ comes from ``rho`` (a list) or from ``lambda`` (total coupling) and ``areas``.
    """
    logger.info(f"wilson asymptotic request received with arguments: {arguments}")
    group = parse_group(arguments)
    f = parse_observable(group, arguments)
    order = as_int(arguments, "order", 3)
    if arguments.get("rho") is not None:
        rhos = as_float_list(arguments, "rho")
    else:
        a1, a2 = _two_areas(arguments)
        rhos = [sphere_rho(as_float(arguments, "lambda", positive=True), a1, a2).rho]

    series = asymptotic_series(group, f, order)
    report = Report("wilson asymptotic",
                    inputs={**group.to_dict(), "observable": f.to_dict(), "rho": rhos, "order": order})
    values = []
    for rho in rhos:
        numeric = gaussian_lie_expectation(group, f, rho)
        closed = gaussian_closed_form(group, f, rho)
        partial = series.evaluate(rho)
        values.append({
            "rho": rho,
            "quadrature": measured(numeric, CLOSED_FORM_TOL),
            "closed_form": measured(closed, 1e-14),
            "series": measured(partial, abs(closed - partial), kind="remainder"),
        })
        report.add_check(f"quadrature_vs_closed_form_rho_{rho:g}", ("gauss_hermite", "closed_form"),
                         numeric, closed, CLOSED_FORM_TOL * max(1.0, abs(closed)))
        report.add_row("quadrature", numeric, CLOSED_FORM_TOL, rho=rho)
        report.add_row("closed_form", closed, 1e-14, rho=rho)
        report.add_row("series", partial, abs(closed - partial), rho=rho)

    remainder = remainder_check(group, f, order)
    bound = growth_bound(group, f)
    report.results.update({
        "values": values,
        "series": series.to_dict(),
        "remainder": remainder.to_dict(),
        "growth_bound": bound.to_dict(),
    })
    report.add_assertion("remainder_is_o_rho_n", ("asymptotic_series", "closed_form"), remainder.passed)
    report.add_assertion("entire_series_envelope", ("asymptotic_series", "growth_bound"), bound.passed)
    return report


def _parse_loop(arguments: Dict[str, Any]) -> ContourLoop:
    kind = str(arguments.get("loop", "circle"))
    if kind == "circle":
        return Circle(radius=as_float(arguments, "radius", 1.0, positive=True))
    if kind == "ellipse":
        return PolyParam.ellipse(as_float(arguments, "a", 1.0, positive=True), as_float(arguments, "b", 0.5, positive=True))
    raise InvalidParameterError(f"Unknown loop {kind!r}", choices=["circle", "ellipse"])


def handle_wilson_pert(arguments: Dict[str, Any]) -> Report:
    """
    Perturbative coefficients of tr ρ(hol_γ) through ``order``, compared in ρ
    units against the asymptotic series (orders 0..2 asserted).
    """
    logger.info(f"wilson pert request received with arguments: {arguments}")
    group = parse_group(arguments)
    rep = MatrixRep.for_irrep(group.irrep(as_int(arguments, "irrep", 2 if group.kind.value == "SU2" else 1)))
    loop = _parse_loop(arguments)
    order = as_int(arguments, "order", 2)
    tol = as_float(arguments, "tolerance", 1e-4, positive=True)

    options = {}
    if arguments.get("nodes"):
        options["nodes"] = as_int(arguments, "nodes")
    if arguments.get("qmc_log2"):
        options["qmc_log2"] = as_int(arguments, "qmc_log2")
    if arguments.get("seed") is not None:
        options["seed"] = as_int(arguments, "seed")

    comparison = decompactified_comparison(rep, loop, order, tol=tol, **options)
    report = Report("wilson pert", inputs={
        **group.to_dict(), "irrep": rep.irrep.label, "loop": loop.to_dict(), "order": order, "tolerance": tol,
    })
    report.results.update(comparison.to_dict())
    report.results["coefficients"] = [c.to_dict() for c in comparison.coefficients]

    for n, coeff in enumerate(comparison.coefficients):
        pert = float(comparison.pert_series.coeffs[n])
        asym = float(comparison.asymptotic.coeffs[n])
        stderr = coeff.stderr / comparison.enclosed_area**n
        if n in comparison.asserted_orders:
            report.add_check(f"order_{n}", ("wilson_pert_coeff", "asymptotic_series"), pert, asym, tol)
        report.add_row("perturbative", pert, stderr, order=n)
        report.add_row("asymptotic", asym, 0.0, order=n)
    return report

"""
Group and Heat-Kernel Commands
==============================

Handlers behind ``irreps``, ``heat-kernel``, ``partition`` and ``lie-identities``.
Each takes the plain argument dict the CLI builds and returns a Report.

Dependencies:
- loguru: handler entry logging

Sample Input:
    handle_heat_kernel({"group": "SU2", "t": 0.5, "theta": "0.3,1.0"})

Expected Output:
    Report with one value per θ and a character-vs-geodesic check at each regular θ
"""

import math
from typing import Any, Dict

from loguru import logger

from ..config import get_settings
from ..core.errors import InvalidParameterError
from ..core.heatkernel import (
    HeatKernelQuery,
    Truncation,
    calibrate_scalar_curvature,
    evaluate_heat_kernel,
    heat_kernel_geodesic,
    is_regular,
    kernel_function,
)
from ..core.lattice import partition_function
from ..core.liegroup import GroupKind, enumerate_irreps, verify_lie_identities
from ..core.surface import SurfaceMap
from .arguments import as_float, as_float_list, as_int, parse_group
from .reports import Report, measured

TWO_METHOD_TOL = 1e-8


def _parse_truncation(text: str) -> Truncation:
    """"auto", "casimir:<c>" or "winding:<k>"."""
    text = (text or "auto").strip().lower()
    if text == "auto":
        return Truncation.auto()
    mode, _, value = text.partition(":")
    try:
        if mode == "casimir":
            return Truncation.casimir_cutoff(float(value))
        if mode == "winding":
            return Truncation.winding_cutoff(int(value))
    except ValueError as e:
        raise InvalidParameterError(f"Bad truncation value {value!r}") from e
    raise InvalidParameterError(f"Unknown truncation {text!r}", choices=["auto", "casimir:<c>", "winding:<k>"])


def handle_irreps(arguments: Dict[str, Any]) -> Report:
    """List irreps with Casimir at most ``cutoff``."""
    logger.info(f"irreps request received with arguments: {arguments}")
    group = parse_group(arguments)
    cutoff = as_float(arguments, "cutoff", 10.0)

    irreps = enumerate_irreps(group, cutoff)
    report = Report("irreps", inputs={**group.to_dict(), "cutoff": cutoff})
    report.results["irreps"] = [r.to_dict() for r in irreps]
    report.results["count"] = len(irreps)
    for r in irreps:
        report.add_row("enumerate_irreps", r.casimir, 0.0, label=r.label, dim=r.dim)
    return report


def handle_heat_kernel(arguments: Dict[str, Any]) -> Report:
    """
    K_t at a list of torus angles.

    For t >= ``Settings.SMALL_T`` every regular angle is also evaluated by the
    geodesic (or winding) sum and compared with the character sum.
    """
    logger.info(f"heat-kernel request received with arguments: {arguments}")
    group = parse_group(arguments)
    t = as_float(arguments, "t", positive=True)
    thetas = as_float_list(arguments, "theta")
    truncation = _parse_truncation(arguments.get("truncation", "auto"))

    report = Report(
        "heat-kernel",
        inputs={**group.to_dict(), "t": t, "theta": thetas, "truncation": truncation.mode.value},
    )
    values = []
    for theta in thetas:
        hk = evaluate_heat_kernel(HeatKernelQuery(group, t, theta, truncation))
        values.append({**hk.to_dict(), "error_estimate": hk.tail_bound})
        report.add_row(hk.method, hk.value, hk.tail_bound, t=t, theta=theta)

        if math.isfinite(t) and t >= get_settings().SMALL_T and is_regular(group, theta):
            series = kernel_function(group, t)(theta)
            geodesic = heat_kernel_geodesic(group, t, theta, winding_cutoff=None)
            report.add_check(
                f"two_method_theta_{theta:g}",
                ("character_sum", "geodesic_sum"),
                series,
                geodesic,
                TWO_METHOD_TOL * max(1.0, abs(series)),
            )
    report.results["values"] = values
    if group.kind is GroupKind.SU2:
        report.results["scalar_curvature"] = calibrate_scalar_curvature(group).to_dict()
    return report


def handle_partition(arguments: Dict[str, Any]) -> Report:
    """
    Z for a closed surface of genus h.

    With ``map`` the genus comes from the surface map and ``lambda`` is read as
    λ₀, so λ = λ₀·|Σ|; without it ``lambda`` is the total coupling.
    """
    logger.info(f"partition request received with arguments: {arguments}")
    group = parse_group(arguments)
    lam = as_float(arguments, "lambda", positive=True)

    if arguments.get("map"):
        smap = SurfaceMap.from_json(arguments["map"])
        genus, total = smap.genus, lam * float(smap.total_area)
    else:
        genus, total = as_int(arguments, "genus", 0), lam

    z = partition_function(group, genus, total)
    report = Report("partition", inputs={**group.to_dict(), "genus": genus, "lambda": total})
    tail = get_settings().TAIL_TOL
    report.results["Z"] = measured(z, tail)
    report.add_row("partition_function", z, tail, genus=genus, lam=total)

    # dim^{2-2h} is 1 for every U(1) irrep, and Z(S²) = K_λ(1), so both reduce to the kernel at the identity
    if genus == 0 or group.kind is GroupKind.U1:
        k_identity = evaluate_heat_kernel(HeatKernelQuery(group, total, 0.0)).value
        report.add_check("z_vs_kernel_at_identity", ("partition_function", "heat_kernel"), z, k_identity,
                         1e-10 * max(1.0, abs(z)))
        report.add_row("heat_kernel", k_identity, tail, genus=genus, lam=total)
    return report


def handle_lie_identities(arguments: Dict[str, Any]) -> Report:
    """Lie-factor identities of the second-order diagrams."""
    logger.info(f"lie-identities request received with arguments: {arguments}")
    group = parse_group(arguments)
    tolerance = as_float(arguments, "tolerance", 1e-12, positive=True)

    outcome = verify_lie_identities(group, tolerance)
    report = Report("lie-identities", inputs={**group.to_dict(), "tolerance": tolerance})
    report.results.update(outcome.to_dict())
    for name, deviation in outcome.deviations.items():
        report.add_check(name, ("structure_constants", "casimir_matrix"), deviation, 0.0, tolerance)
        report.add_row(name, deviation, tolerance)
    report.add_check(
        "divergence_cancellation", ("weighted_lie_factors", "zero"), outcome.cancellation_residual, 0.0, tolerance
    )
    return report

"""Handlers for ``compare-limits`` and ``instanton-gap``."""

from typing import Any, Dict

from loguru import logger

from ..core.asymptotics import instanton_gap, limits_comparison
from ..core.liegroup import GroupKind
from .arguments import as_float, as_int, parse_group, parse_observable
from .reports import Report, measured


def handle_compare_limits(arguments: Dict[str, Any]) -> Report:
    """
    Decompactify-then-expand against expand-then-decompactify for χ_m.

    Orders 0 and 1 always agree. For SU(2) with m >= 2 the first mismatch is
    at order 2; the abelian Gaussian is exact, so U(1) never differs.
    """
    logger.info(f"compare-limits request received with arguments: {arguments}")
    group = parse_group(arguments)
    m = as_int(arguments, "m", 2)
    order = as_int(arguments, "order", 3)

    comparison = limits_comparison(m, order, group)
    report = Report("compare-limits", inputs={**group.to_dict(), "m": m, "order": order})
    report.results.update(comparison.to_dict())

    a, b = comparison.limit_first.coeffs, comparison.asymptotics_first.coeffs
    for k in range(2):
        report.add_check(f"order_{k}_agrees", ("decompactified_series", "asymptotic_series"), a[k], b[k], 0.0)
    if group.kind is GroupKind.SU2 and m >= 2:
        report.add_assertion("first_difference_at_order_2", ("decompactified_series", "asymptotic_series"),
                             comparison.first_difference == 2)
    elif group.kind is GroupKind.U1:
        report.add_assertion("series_identical", ("decompactified_series", "asymptotic_series"),
                             comparison.first_difference is None)
    for k in range(order + 1):
        report.add_row("limit_then_asymptotics", float(a[k]), 0.0, order=k)
        report.add_row("asymptotics_then_limit", float(b[k]), 0.0, order=k)
    return report


def handle_instanton_gap(arguments: Dict[str, Any]) -> Report:
    """
    |exact - Gaussian| on the unit sphere and its fitted exponent κ in C e^{-κ/λ}.

    The exponential bound is asserted only in the small-coupling regime λ <= 1.
    """
    logger.info(f"instanton-gap request received with arguments: {arguments}")
    group = parse_group(arguments)
    f = parse_observable(group, arguments)
    lam = as_float(arguments, "lambda", positive=True)
    fraction = arguments.get("fraction")
    fraction = None if fraction is None else as_float(arguments, "fraction")

    gap = instanton_gap(group, f, lam, equal_areas=fraction is None, fraction=fraction,
                        stability=as_float(arguments, "stability", 0.2, positive=True))
    report = Report("instanton-gap", inputs={
        **group.to_dict(), "observable": f.to_dict(), "lambda": lam, "fraction": fraction or 0.5,
    })
    report.results.update(gap.to_dict())
    report.results["gap"] = measured(gap.gap, 10.0 ** (-gap.precision_digits), kind="working_precision")
    for value, log10_gap in gap.grid:
        report.add_row("exact_minus_gaussian", log10_gap, 0.0, lam=value)
    if lam <= 1.0:
        report.add_assertion("exponential_bound", ("wilson_fusion_sum", "gaussian_closed_form"), gap.bound_ok,
                             note=f"kappa={gap.kappa:.6g}")
    return report

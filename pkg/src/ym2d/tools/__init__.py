"""Command handlers for ym2d: argument dict in, Report out."""

from .reports import Check, Report, measured
from .group_tools import handle_irreps, handle_heat_kernel, handle_partition, handle_lie_identities
from .wilson_tools import (
    handle_wilson_exact,
    handle_wilson_r2,
    handle_wilson_mc,
    handle_wilson_asymptotic,
    handle_wilson_pert,
)
from .asymptotic_tools import handle_compare_limits, handle_instanton_gap
from .wick_tools import handle_wick_demo

__all__ = [
    "Check",
    "Report",
    "measured",
    "handle_irreps",
    "handle_heat_kernel",
    "handle_partition",
    "handle_lie_identities",
    "handle_wilson_exact",
    "handle_wilson_r2",
    "handle_wilson_mc",
    "handle_wilson_asymptotic",
    "handle_wilson_pert",
    "handle_compare_limits",
    "handle_instanton_gap",
    "handle_wick_demo",
]

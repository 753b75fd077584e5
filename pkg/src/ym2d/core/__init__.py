"""
ym2d Core Layer
===============

Pure computation for two-dimensional Yang-Mills Wilson loops.
No CLI dependencies - just the mathematics.
"""

from .errors import (
    Ym2dError,
    InvalidParameterError,
    UnsupportedGroupError,
    SurfaceMapError,
    SelfIntersectionError,
    QuadratureError,
    TruncationError,
    SamplingError,
    IdentityCheckError,
)
from .liegroup import (
    GroupKind,
    GroupModel,
    Irrep,
    ClassFunction,
    enumerate_irreps,
    character_at,
    weyl_densities,
    torus_mean,
    weyl_integrate,
    fusion_multiplicity,
    lie_algebra_basis,
    spin_matrices,
    LieIdentityReport,
    verify_lie_identities,
)
from .heatkernel import (
    Truncation,
    TruncationMode,
    HeatKernelQuery,
    HeatKernelValue,
    CharacterSeries,
    character_series,
    character_tail_bound,
    select_label_cutoff,
    kernel_function,
    riemannian_volume,
    analytic_scalar_curvature,
    heat_kernel_geodesic,
    calibrate_scalar_curvature,
    evaluate_heat_kernel,
    heat_kernel,
    convolution_check,
)
from .surface import (
    Face,
    SurfaceMap,
    SurfaceKind,
    LoopConfig,
    subdivide,
    sphere_one_edge,
    genus_polygon,
    torus_one_face,
)
from .lattice import (
    MonteCarloResult,
    partition_function,
    plane_partition_function,
    wilson_exact_simple,
    wilson_fusion_sum,
    wilson_exact_r2,
    wilson_exact_plane,
    graph_expectation_mc,
)
from .asymptotics import (
    RhoParam,
    PowerSeries,
    SeriesVariable,
    sphere_rho,
    decompactified_rho,
    gaussian_lie_expectation,
    gaussian_closed_form,
    su2_wilson_asymptotic,
    asymptotic_series,
    decompactified_series,
    RemainderCheck,
    remainder_check,
    GrowthBound,
    growth_bound,
    InstantonGap,
    instanton_gap,
    LimitsComparison,
    limits_comparison,
)
from .wick import (
    Generator,
    GradedExpr,
    PairingKernel,
    canonicalize,
    contract_vector,
    apply_pairing,
    wick_expectation,
    perfect_matchings,
    matching_sum,
    berezin_integral,
    berezin_gaussian,
    pfaffian_gaussian,
    fermionic_pairing,
    fermionic_two_point,
)
from .pertloop import (
    LoopKind,
    ContourLoop,
    Circle,
    PolyParam,
    MatrixRep,
    check_simple,
    hol_propagator_on_loop,
    PertCoefficient,
    wilson_pert_terms,
    wilson_pert_coeff,
    PertComparison,
    decompactified_comparison,
    AreaIndependence,
    area_independence_check,
)

__all__ = [
    # Errors
    "Ym2dError",
    "InvalidParameterError",
    "UnsupportedGroupError",
    "SurfaceMapError",
    "SelfIntersectionError",
    "QuadratureError",
    "TruncationError",
    "SamplingError",
    "IdentityCheckError",

    # Groups and representations
    "GroupKind",
    "GroupModel",
    "Irrep",
    "ClassFunction",
    "enumerate_irreps",
    "character_at",
    "weyl_densities",
    "torus_mean",
    "weyl_integrate",
    "fusion_multiplicity",
    "lie_algebra_basis",
    "spin_matrices",
    "LieIdentityReport",
    "verify_lie_identities",

    # Heat kernel
    "Truncation",
    "TruncationMode",
    "HeatKernelQuery",
    "HeatKernelValue",
    "CharacterSeries",
    "character_series",
    "character_tail_bound",
    "select_label_cutoff",
    "kernel_function",
    "riemannian_volume",
    "analytic_scalar_curvature",
    "heat_kernel_geodesic",
    "calibrate_scalar_curvature",
    "evaluate_heat_kernel",
    "heat_kernel",
    "convolution_check",

    # Surfaces and lattice
    "Face",
    "SurfaceMap",
    "SurfaceKind",
    "LoopConfig",
    "subdivide",
    "sphere_one_edge",
    "genus_polygon",
    "torus_one_face",
    "MonteCarloResult",
    "partition_function",
    "plane_partition_function",
    "wilson_exact_simple",
    "wilson_fusion_sum",
    "wilson_exact_r2",
    "wilson_exact_plane",
    "graph_expectation_mc",

    # Asymptotics
    "RhoParam",
    "PowerSeries",
    "SeriesVariable",
    "sphere_rho",
    "decompactified_rho",
    "gaussian_lie_expectation",
    "gaussian_closed_form",
    "su2_wilson_asymptotic",
    "asymptotic_series",
    "decompactified_series",
    "RemainderCheck",
    "remainder_check",
    "GrowthBound",
    "growth_bound",
    "InstantonGap",
    "instanton_gap",
    "LimitsComparison",
    "limits_comparison",

    # Wick engine
    "Generator",
    "GradedExpr",
    "PairingKernel",
    "canonicalize",
    "contract_vector",
    "apply_pairing",
    "wick_expectation",
    "perfect_matchings",
    "matching_sum",
    "berezin_integral",
    "berezin_gaussian",
    "pfaffian_gaussian",
    "fermionic_pairing",
    "fermionic_two_point",

    # Perturbative loops
    "LoopKind",
    "ContourLoop",
    "Circle",
    "PolyParam",
    "MatrixRep",
    "check_simple",
    "hol_propagator_on_loop",
    "PertCoefficient",
    "wilson_pert_terms",
    "wilson_pert_coeff",
    "PertComparison",
    "decompactified_comparison",
    "AreaIndependence",
    "area_independence_check",
]

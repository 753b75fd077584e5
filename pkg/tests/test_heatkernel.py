"""
Tests for the heat kernel engines.

The character sum and the geodesic (winding) sum are independent, so their
agreement after a single curvature calibration is the main oracle; the
semigroup identity and ∫K = 1 pin down the normalization.
"""

import math

import mpmath
import numpy as np
import pytest

from ym2d.core import (
    GroupModel,
    HeatKernelQuery,
    InvalidParameterError,
    Truncation,
    TruncationError,
    analytic_scalar_curvature,
    calibrate_scalar_curvature,
    character_tail_bound,
    convolution_check,
    evaluate_heat_kernel,
    heat_kernel,
    heat_kernel_geodesic,
    kernel_function,
    select_label_cutoff,
    weyl_integrate,
)


class TestNormalization:
    """K_t is a probability density against Haar measure."""

    @pytest.mark.parametrize("group_name", ["SU2", "U1"])
    @pytest.mark.parametrize("t", [0.05, 0.5, 2.0])
    def test_integrates_to_one(self, group_name, t):
        group = GroupModel(group_name)
        k = kernel_function(group, t)
        assert weyl_integrate(group, k, bandwidth=k.bandwidth) == pytest.approx(1.0, abs=1e-10)

    def test_stationary_limit(self, su2):
        """t = inf gives the constant kernel 1."""
        value = evaluate_heat_kernel(HeatKernelQuery(su2, math.inf, 1.2))
        assert value.value == 1.0
        assert value.method == "stationary"

    def test_even_in_theta(self, su2):
        k = kernel_function(su2, 0.3)
        assert k(0.7) == pytest.approx(k(-0.7))

    def test_positive_on_torus(self, su2):
        """K_t > 0 for θ ∈ [0, 3]."""
        for t in (0.1, 0.5, 1.0):
            for theta in np.linspace(0.0, 3.0, 31):
                assert heat_kernel(HeatKernelQuery(su2, t, float(theta))) > 0, f"t={t} θ={theta}"

    @pytest.mark.parametrize("t", [0.01, 0.05, 0.1])
    @pytest.mark.parametrize("theta", [math.pi - 1e-2, math.pi - 1e-4, math.pi])
    def test_positive_near_antipode(self, su2, t, theta):
        """K_t ~ e^{-π²/t} at the antipode; at t = 0.01 that is below the double range."""
        value = evaluate_heat_kernel(HeatKernelQuery(su2, t, theta)).value
        assert value >= 0.0, f"t={t} θ={theta}: {value}"
        if t >= 0.05:
            assert value > 0.0, f"t={t} θ={theta}: {value}"

    @pytest.mark.parametrize("t", [0.05, 0.1, 0.3])
    @pytest.mark.parametrize("theta", [math.pi - 1e-4, math.pi])
    def test_antipode_against_extended_precision(self, su2, t, theta):
        """The character sum in 150-digit arithmetic resolves what cancels in doubles."""
        hk = evaluate_heat_kernel(HeatKernelQuery(su2, t, theta))
        with mpmath.workdps(150):
            th = mpmath.mpf(theta)
            total = mpmath.mpf(0)
            for m in range(1, 400):
                chi = m * (-1) ** (m - 1) if theta == math.pi else mpmath.sin(m * th) / mpmath.sin(th)
                total += m * chi * mpmath.exp(-t * (m * m - 1) / mpmath.mpf(4))
            reference = float(total)
        assert hk.method == "geodesic"
        assert hk.value == pytest.approx(reference, rel=1e-8), f"t={t} θ={theta}"
        assert hk.tail_bound < 1e-12

    def test_rejects_nonpositive_time(self, su2):
        with pytest.raises(InvalidParameterError):
            HeatKernelQuery(su2, 0.0, 0.0)
        with pytest.raises(InvalidParameterError):
            kernel_function(su2, -1.0)


class TestTwoMethods:
    """Character sum vs geodesic sum."""

    def test_curvature_calibration(self, su2):
        """The fitted scalar curvature reproduces 6/R² = 3/c²."""
        calibration = calibrate_scalar_curvature(su2)
        assert analytic_scalar_curvature(su2) == pytest.approx(3.0)
        assert calibration.analytic == pytest.approx(3.0)
        assert calibration.deviation < 1e-6

    @pytest.mark.parametrize("t", [0.05, 0.5, 1.0])
    @pytest.mark.parametrize("theta", [0.3, 1.5, 2.8])
    def test_su2_agreement(self, su2, t, theta):
        series = kernel_function(su2, t)(theta)
        geodesic = heat_kernel_geodesic(su2, t, theta, winding_cutoff=None)
        assert abs(series - geodesic) <= 1e-8 * max(1.0, abs(series)), f"t={t} θ={theta}"

    @pytest.mark.parametrize("t", [0.05, 0.5, 2.0])
    def test_u1_winding_sum(self, u1, t):
        """The winding sum is the Poisson dual of the theta series."""
        for theta in (0.0, 1.0, 3.0):
            series = kernel_function(u1, t)(theta)
            winding = heat_kernel_geodesic(u1, t, theta, winding_cutoff=None)
            assert winding == pytest.approx(series, rel=1e-10)

    def test_geodesic_rejects_singular_angle(self, su2):
        with pytest.raises(InvalidParameterError):
            heat_kernel_geodesic(su2, 0.5, 0.0)

    def test_small_time_routes_to_geodesic(self, su2):
        value = evaluate_heat_kernel(HeatKernelQuery(su2, 0.005, 1.0))
        assert value.method == "geodesic"

    def test_small_time_at_identity(self, su2):
        """θ = 0 goes through the limit of the geodesic sum."""
        value = evaluate_heat_kernel(HeatKernelQuery(su2, 0.005, 0.0))
        assert value.method == "geodesic"
        assert value.value == pytest.approx(kernel_function(su2, 0.005)(0.0), rel=1e-9)

    def test_rescaled_metric_agreement(self):
        group = GroupModel("SU2", 2.0)
        series = kernel_function(group, 0.4)(1.1)
        geodesic = heat_kernel_geodesic(group, 0.4, 1.1, winding_cutoff=None)
        assert abs(series - geodesic) <= 1e-8 * max(1.0, abs(series))


class TestTruncation:
    """Tail bounds and explicit cutoffs."""

    def test_selected_cutoff_meets_tolerance(self, su2):
        cutoff, bound = select_label_cutoff(su2, 0.1, power=2)
        assert bound < 1e-12
        assert character_tail_bound(su2, 0.1, cutoff, power=2) == pytest.approx(bound)

    def test_tail_bound_decreases(self, su2):
        bounds = [character_tail_bound(su2, 0.2, L) for L in (10, 20, 30)]
        assert bounds[0] > bounds[1] > bounds[2]

    def test_small_casimir_cutoff_names_required_cutoff(self, su2):
        with pytest.raises(TruncationError) as excinfo:
            evaluate_heat_kernel(HeatKernelQuery(su2, 0.01, 1.0, Truncation.casimir_cutoff(1.0)))
        assert excinfo.value.details["required_cutoff"] > 1.0

    def test_explicit_winding_cutoff(self, su2):
        value = evaluate_heat_kernel(HeatKernelQuery(su2, 0.5, 1.0, Truncation.winding_cutoff(5)))
        assert value.method == "geodesic"
        assert value.value == pytest.approx(kernel_function(su2, 0.5)(1.0), rel=1e-9)

    def test_bad_truncations(self):
        with pytest.raises(InvalidParameterError):
            Truncation.casimir_cutoff(-1.0)
        with pytest.raises(InvalidParameterError):
            Truncation.winding_cutoff(1.5)


class TestSemigroup:
    """∫K_{t1}(g₁g⁻¹)K_{t2}(g g₂)dg = K_{t1+t2}(g₁g₂)."""

    @pytest.mark.parametrize("group_name", ["SU2", "U1"])
    @pytest.mark.parametrize("t1", [0.05, 0.2, 1.0])
    @pytest.mark.parametrize("t2", [0.05, 0.2, 1.0])
    def test_convolution(self, group_name, t1, t2):
        group = GroupModel(group_name)
        assert convolution_check(group, t1, t2, 0.4, 0.9) < 1e-8

"""
Heat Kernels on U(1) and SU(2)
==============================

K_t(g), the kernel of e^{-tΔ/2} with respect to normalized Haar measure, by two
independent methods:

- character sum: K_t = Σ_ρ dim(ρ) χ_ρ e^{-t c₂(ρ)/2}, truncated with an
  integral-comparison tail bound;
- geodesic sum: K_t(exp Y) = V Σ_{Y'∈exp⁻¹} (2πt)^{-d/2} (j/J)^{-1/2}(Y')
  e^{-|Y'|²/2t + st/12}, where V is the Riemannian volume of G (the Haar
  measure is normalized) and s the scalar curvature. For U(1) this is the
  Poisson-dual winding sum of the Jacobi theta series.

The SU(2) square root (j/J)^{-1/2} is taken on the signed branch θ_k / sin θ
with θ_k = θ + 2πk; that is the branch on which both sums agree.

Dependencies:
- numpy: vectorized series evaluation (https://numpy.org/)
- scipy: tail integrals (integrate.quad), erfc, Gauss-Legendre nodes
  (https://docs.scipy.org/doc/scipy/)

Sample Input:
    heat_kernel(HeatKernelQuery(GroupModel("SU2"), t=0.5, theta=1.0))

Expected Output:
    K_0.5 at θ = 1 from the character sum; heat_kernel_geodesic gives the
    same value to ~1e-12 once the curvature is calibrated
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from loguru import logger
from scipy import integrate, special

from ..config import get_settings
from .errors import InvalidParameterError, QuadratureError, TruncationError
from .liegroup import GroupKind, GroupModel, torus_mean

_CHUNK = 2048
_REGULAR_EPS = 1e-3
# Inside this distance from πℤ the SU(2) geodesic sum uses its analytic limit.
_LIMIT_EPS = 1e-6
_LIMIT_TAIL_TERMS = 8
# Character sums whose value falls this far below Σ|terms| are numerically
# resolved by the geodesic sum instead.
_RESOLUTION_RATIO = 1e-6
_ROUNDOFF = 4.0 * np.finfo(float).eps


class TruncationMode(str, Enum):
    AUTO = "auto"
    CASIMIR = "casimir_cutoff"
    WINDING = "winding_cutoff"


@dataclass(frozen=True)
class Truncation:
    """How far to carry a heat-kernel series."""

    mode: TruncationMode = TruncationMode.AUTO
    value: Optional[float] = None

    @classmethod
    def auto(cls) -> "Truncation":
        return cls()

    @classmethod
    def casimir_cutoff(cls, value: float) -> "Truncation":
        if not value >= 0:
            raise InvalidParameterError("casimir cutoff must be >= 0", value=value)
        return cls(TruncationMode.CASIMIR, float(value))

    @classmethod
    def winding_cutoff(cls, value: int) -> "Truncation":
        if int(value) != value or value < 0:
            raise InvalidParameterError("winding cutoff must be a non-negative integer", value=value)
        return cls(TruncationMode.WINDING, int(value))


@dataclass(frozen=True)
class HeatKernelQuery:
    group: GroupModel
    t: float
    theta: float
    truncation: Truncation = Truncation()

    def __post_init__(self):
        if not (self.t > 0):
            raise InvalidParameterError("Diffusion time t must be > 0", t=self.t)
        if not math.isfinite(self.theta):
            raise InvalidParameterError("theta must be finite", theta=self.theta)


@dataclass(frozen=True)
class HeatKernelValue:
    t: float
    theta: float
    value: float
    method: str
    tail_bound: float
    cutoff: Optional[float]

    def to_dict(self) -> Dict[str, object]:
        return {
            "t": self.t,
            "theta": self.theta,
            "value": self.value,
            "method": self.method,
            "tail_bound": self.tail_bound,
            "cutoff": self.cutoff,
        }


# ============================================
# CHARACTER SUM
# ============================================


def _gauss_rate(group: GroupModel, t: float) -> float:
    """a with t·c₂(x)/2 = a·x² + const."""
    if group.kind is GroupKind.SU2:
        return t / (4.0 * group.metric_scale)
    return t / (2.0 * group.metric_scale)


def character_tail_bound(group: GroupModel, t: float, label_cutoff: int, power: float = 2) -> float:
    """
    Bound on Σ over irreps beyond ``label_cutoff`` of dim^power · e^{-t c₂/2}.

    Uses Σ_{x > L} g(x) <= ∫_L^∞ g(x) dx for g decreasing on [L, ∞); the
    caller's cutoff is raised to the monotone region first. U(1) counts both
    charge signs.
    """
    a = _gauss_rate(group, t)
    if group.kind is GroupKind.SU2:
        p = power
        start = float(label_cutoff)
        if p > 0:
            start = max(start, math.sqrt(p / (2.0 * a)))

        def g(x):
            return x**p * math.exp(-a * (x * x - 1.0))

    else:
        start = float(label_cutoff)

        def g(x):
            return math.exp(-a * x * x)

    value, _ = integrate.quad(g, start, np.inf, epsabs=0.0, epsrel=1e-8, limit=200)
    if start > label_cutoff:
        # labels between the cutoff and the monotone region, summed directly
        value += sum(g(x) for x in range(int(label_cutoff) + 1, int(math.ceil(start)) + 1))
    if group.kind is GroupKind.U1:
        value *= 2.0
    return float(value)


def select_label_cutoff(
    group: GroupModel, t: float, power: float = 2, tol: Optional[float] = None
) -> Tuple[int, float]:
    """
    Smallest label cutoff (grown geometrically) whose tail bound is below ``tol``.

    Raises:
        TruncationError: If the required cutoff exceeds ``Settings.QUAD_BUDGET``
    """
    settings = get_settings()
    tol = settings.TAIL_TOL if tol is None else tol
    a = _gauss_rate(group, t)
    cutoff = max(4, int(math.sqrt(max(power, 0.0) / (2.0 * a))) + 2)
    while True:
        bound = character_tail_bound(group, t, cutoff, power)
        if bound < tol:
            return cutoff, bound
        if cutoff > settings.QUAD_BUDGET:
            raise TruncationError(
                "Character series needs more terms than the quadrature budget allows",
                required_cutoff=cutoff, tail_bound=bound, t=t,
            )
        cutoff = int(cutoff * 1.5) + 1


@dataclass(frozen=True, eq=False)
class CharacterSeries:
    """K_t as a cosine series Σ_w b_w cos(wθ) over non-negative torus weights."""

    group: GroupModel
    t: float
    weights: np.ndarray
    coeffs: np.ndarray
    label_cutoff: int
    tail_bound: float

    @property
    def bandwidth(self) -> int:
        return int(self.weights[-1]) if len(self.weights) else 0

    @property
    def abs_sum(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        flat = theta.reshape(-1)
        out = np.empty_like(flat)
        for start in range(0, flat.size, _CHUNK):
            chunk = flat[start:start + _CHUNK]
            out[start:start + _CHUNK] = np.cos(np.outer(chunk, self.weights)) @ self.coeffs
        out = out.reshape(theta.shape)
        return out if out.ndim else float(out)


def _build_series(group: GroupModel, t: float, label_cutoff: int, tail_bound: float) -> CharacterSeries:
    if math.isinf(t):
        return CharacterSeries(group, t, np.array([0.0]), np.array([1.0]), 0, 0.0)
    if group.kind is GroupKind.SU2:
        coeffs = np.zeros(label_cutoff)
        for m in range(1, label_cutoff + 1):
            damp = m * math.exp(-t * (m * m - 1) / (4.0 * group.metric_scale))
            ws = np.arange(m - 1, -1, -2)
            # ±w pair up into cos(wθ); w = 0 occurs once
            coeffs[ws] += np.where(ws > 0, 2.0 * damp, damp)
    else:
        n = np.arange(label_cutoff + 1)
        coeffs = 2.0 * np.exp(-t * n**2 / (2.0 * group.metric_scale))
        coeffs[0] = 1.0
    weights = np.arange(len(coeffs), dtype=float)
    return CharacterSeries(group, t, weights, coeffs, label_cutoff, tail_bound)


@lru_cache(maxsize=256)
def character_series(group: GroupModel, t: float, label_cutoff: Optional[int] = None) -> CharacterSeries:
    """
    Cached character-sum representation of K_t.

    ``label_cutoff=None`` selects the cutoff from the tail bound; ``t = inf``
    gives K_∞ ≡ 1.
    """
    if math.isinf(t):
        return _build_series(group, t, 0, 0.0)
    if label_cutoff is None:
        label_cutoff, bound = select_label_cutoff(group, t, power=2)
    else:
        bound = character_tail_bound(group, t, label_cutoff, power=2)
    logger.debug(f"character series {group} t={t}: cutoff {label_cutoff}, tail {bound:.2e}")
    return _build_series(group, t, label_cutoff, bound)


def kernel_function(group: GroupModel, t: float) -> CharacterSeries:
    """Vectorized θ -> K_t(exp θ·generator); the evaluator the integration engines share."""
    if not t > 0:
        raise InvalidParameterError("Diffusion time t must be > 0", t=t)
    return character_series(group, float(t))


# ============================================
# GEODESIC / WINDING SUM
# ============================================


def riemannian_volume(group: GroupModel) -> float:
    """Volume of G in the chosen metric: S³ of radius √(2c²), or a circle of radius c."""
    if group.kind is GroupKind.SU2:
        return 2.0 * math.pi**2 * (2.0 * group.metric_scale) ** 1.5
    return 2.0 * math.pi * math.sqrt(group.metric_scale)


def analytic_scalar_curvature(group: GroupModel) -> float:
    """6/R² for the 3-sphere of radius R = √(2c²); zero for U(1)."""
    return 3.0 / group.metric_scale if group.kind is GroupKind.SU2 else 0.0


def _reduce_angle(theta: float) -> float:
    return math.remainder(theta, 2.0 * math.pi)


def is_regular(group: GroupModel, theta: float) -> bool:
    if group.kind is GroupKind.U1:
        return True
    return abs(math.sin(theta)) > math.sin(_REGULAR_EPS)


def _geodesic_sum(group: GroupModel, t: float, theta: float, winding_cutoff: int, curvature: float) -> float:
    ks = np.arange(-winding_cutoff, winding_cutoff + 1)
    theta_k = theta + 2.0 * math.pi * ks
    q = group.generator_norm_sq
    d = group.dim_g
    prefactor = riemannian_volume(group) * (2.0 * math.pi * t) ** (-d / 2.0)
    exponent = -q * theta_k**2 / (2.0 * t) + curvature * t / 12.0
    if group.kind is GroupKind.U1:
        terms = prefactor * np.exp(exponent)
    elif abs(math.sin(theta)) < _LIMIT_EPS:
        # Σ θ_k g(θ_k) and sin θ vanish together on πℤ; take the ratio of derivatives
        terms = prefactor * (1.0 - q * theta_k**2 / t) * np.exp(exponent) / math.cos(theta)
    else:
        terms = prefactor * (theta_k / math.sin(theta)) * np.exp(exponent)
    return math.fsum(terms.tolist())


def winding_tail_bound(group: GroupModel, t: float, theta: float, winding_cutoff: int, curvature: float = 0.0) -> float:
    """
    Bound on the omitted windings |k| > K of the geodesic sum.

    With θ reduced to [-π, π] every omitted |θ_k| is at least X₀ = 2π(K+1) - π;
    the terms decrease beyond X₀, so they are bounded by the first term plus an
    integral (spacing 2π), for both signs of k. At the singular angles the
    derivative terms (1 + qX²/t) e^{-qX²/2t} are summed explicitly instead.
    """
    theta = _reduce_angle(theta)
    q = group.generator_norm_sq
    d = group.dim_g
    x0 = 2.0 * math.pi * (winding_cutoff + 1) - math.pi
    prefactor = riemannian_volume(group) * (2.0 * math.pi * t) ** (-d / 2.0) * math.exp(curvature * t / 12.0)
    gauss = math.exp(-q * x0**2 / (2.0 * t))
    if group.kind is GroupKind.SU2 and abs(math.sin(theta)) < _LIMIT_EPS:
        xs = x0 + 2.0 * math.pi * np.arange(_LIMIT_TAIL_TERMS)
        terms = (1.0 + q * xs**2 / t) * np.exp(-q * xs**2 / (2.0 * t))
        # doubled for the last omitted term's remainder, again for both signs of k
        return float(4.0 * prefactor * math.fsum(terms.tolist()) / abs(math.cos(theta)))
    if group.kind is GroupKind.SU2:
        x0 = max(x0, math.sqrt(t / q))
        s = abs(math.sin(theta))
        first = x0 / s * gauss
        tail = (t / q) * gauss / s / (2.0 * math.pi)
    else:
        first = gauss
        tail = math.sqrt(math.pi * t / (2.0 * q)) * special.erfc(x0 * math.sqrt(q / (2.0 * t))) / (2.0 * math.pi)
    return float(2.0 * prefactor * (first + tail))


def _auto_winding_cutoff(group: GroupModel, t: float, theta: float, curvature: float) -> Tuple[int, float]:
    settings = get_settings()
    # both images of θ nearest the antipode
    k = 1
    while True:
        bound = winding_tail_bound(group, t, theta, k, curvature)
        if bound < settings.TAIL_TOL:
            return k, bound
        k += 1
        if k > settings.QUAD_BUDGET:
            raise TruncationError("Winding sum did not converge", required_cutoff=k, tail_bound=bound, t=t)


def heat_kernel_geodesic(
    group: GroupModel,
    t: float,
    theta: float,
    winding_cutoff: Optional[int] = 20,
    curvature: Optional[float] = None,
) -> float:
    """
    K_t(exp θ·generator) as the sum over geodesics with |winding| <= cutoff.

    Args:
        group: SU(2) (geodesic sum) or U(1) (winding sum)
        t: Diffusion time > 0
        theta: Torus angle; for SU(2) it must be regular (θ ∉ πℤ)
        winding_cutoff: Largest |k| kept; None picks it from the tail bound
        curvature: Scalar curvature s; defaults to the calibrated value

    Returns:
        Truncated geodesic sum

    Raises:
        InvalidParameterError: If t <= 0 or θ is not regular
    """
    if not t > 0:
        raise InvalidParameterError("Diffusion time t must be > 0", t=t)
    if not is_regular(group, theta):
        raise InvalidParameterError(
            "The geodesic sum degenerates at non-regular elements (theta in pi*Z)", theta=theta
        )
    if curvature is None:
        curvature = calibrate_scalar_curvature(group).fitted
    if winding_cutoff is None:
        winding_cutoff, _ = _auto_winding_cutoff(group, t, theta, curvature)
    if winding_cutoff < 0:
        raise InvalidParameterError("winding_cutoff must be >= 0", winding_cutoff=winding_cutoff)
    return _geodesic_sum(group, t, theta, int(winding_cutoff), curvature)


@dataclass(frozen=True)
class CurvatureCalibration:
    """Scalar curvature fitted from one two-method agreement point."""

    fitted: float
    analytic: float
    t: float
    theta: float

    @property
    def deviation(self) -> float:
        return abs(self.fitted - self.analytic)

    def to_dict(self) -> Dict[str, float]:
        return {"fitted": self.fitted, "analytic": self.analytic, "t": self.t,
                "theta": self.theta, "deviation": self.deviation}


@lru_cache(maxsize=16)
def calibrate_scalar_curvature(group: GroupModel, t: float = 0.5, theta: float = 1.0) -> CurvatureCalibration:
    """
    Fix s in e^{st/12} by matching the geodesic sum to the character sum at (t, θ).

    All other (t, θ) points then validate the fitted constant.
    """
    if group.kind is GroupKind.U1:
        return CurvatureCalibration(0.0, 0.0, t, theta)
    exact = kernel_function(group, t)(theta)
    bare = _geodesic_sum(group, t, theta, 20, 0.0)
    fitted = 12.0 / t * math.log(exact / bare)
    calibration = CurvatureCalibration(fitted, analytic_scalar_curvature(group), t, theta)
    logger.debug(f"calibrated scalar curvature {fitted:.12f} (analytic {calibration.analytic})")
    return calibration


# ============================================
# PUBLIC EVALUATION
# ============================================


def evaluate_heat_kernel(q: HeatKernelQuery) -> HeatKernelValue:
    """
    Evaluate K_t at one torus point, routing between the two engines.

    ``auto`` uses the geodesic sum for t <= ``Settings.SMALL_T``, and also
    whenever the character sum would lose its value to cancellation (near the
    antipode θ = π at moderate t); everything else goes through the character
    sum, whose error estimate includes its roundoff floor. At θ ∈ πℤ the SU(2)
    geodesic sum is evaluated through its analytic limit. Values below the
    double-precision range (e.g. t = 0.01 at θ = π, where K ~ e^{-π²/t}) come
    back as 0.0.

    Raises:
        TruncationError: If an explicit Casimir cutoff leaves a tail above
            ``Settings.TAIL_TOL``; the message names the required cutoff
    """
    settings = get_settings()
    group, t, theta = q.group, float(q.t), float(q.theta)

    if math.isinf(t):
        return HeatKernelValue(t, theta, 1.0, "stationary", 0.0, None)

    mode = q.truncation.mode
    if mode is TruncationMode.WINDING:
        curvature = calibrate_scalar_curvature(group).fitted
        k = int(q.truncation.value)
        value = heat_kernel_geodesic(group, t, theta, k, curvature)
        return HeatKernelValue(t, theta, value, "geodesic", winding_tail_bound(group, t, theta, k, curvature), k)

    if mode is TruncationMode.CASIMIR:
        cutoff = _labels_below(group, q.truncation.value)
        bound = character_tail_bound(group, t, cutoff, power=2)
        if bound > settings.TAIL_TOL:
            needed, _ = select_label_cutoff(group, t, power=2)
            raise TruncationError(
                f"Casimir cutoff {q.truncation.value} leaves tail {bound:.2e}",
                required_cutoff=float(group.casimir_of_label(needed)), tail_bound=bound,
            )
        series = character_series(group, t, cutoff)
        return HeatKernelValue(t, theta, series(theta), "character", bound, q.truncation.value)

    if t <= settings.SMALL_T:
        return _geodesic_value(group, t, theta)

    series = kernel_function(group, t)
    value = series(theta)
    roundoff = _ROUNDOFF * series.abs_sum
    if abs(value) < _RESOLUTION_RATIO * series.abs_sum:
        return _geodesic_value(group, t, theta)
    return HeatKernelValue(
        t, theta, value, "character", max(series.tail_bound, roundoff),
        float(group.casimir_of_label(series.label_cutoff)),
    )


def _geodesic_value(group: GroupModel, t: float, theta: float) -> HeatKernelValue:
    reduced = _reduce_angle(theta)
    curvature = calibrate_scalar_curvature(group).fitted
    k, bound = _auto_winding_cutoff(group, t, reduced, curvature)
    value = _geodesic_sum(group, t, reduced, k, curvature)
    return HeatKernelValue(t, theta, value, "geodesic", bound, k)


def _labels_below(group: GroupModel, casimir_cutoff: float) -> int:
    if group.kind is GroupKind.SU2:
        return max(1, int(math.floor(math.sqrt(2.0 * group.metric_scale * casimir_cutoff + 1.0) + 1e-12)))
    return int(math.floor(math.sqrt(group.metric_scale * casimir_cutoff) + 1e-12))


def heat_kernel(q: HeatKernelQuery) -> float:
    """K_t(exp θ·generator); even in θ, integrates to 1 over G."""
    return evaluate_heat_kernel(q).value


# ============================================
# CONVOLUTION
# ============================================


def _su2_convolution(k1: Callable, k2: Callable, theta1: float, theta2: float, tol: float) -> float:
    """
    ∫_G K₁(g₁g⁻¹) K₂(g g₂) dg with g₁, g₂ on the torus.

    g = (cos ψ, sin ψ·n) has Haar density (2/π) sin²ψ dψ × uniform axis; only
    u = n_z enters the class angles, and it is uniform on [-1, 1].
    """
    settings = get_settings()
    previous = None
    n = 32
    while n <= min(settings.QUAD_BUDGET, 1024):
        x, w = np.polynomial.legendre.leggauss(n)
        psi = 0.5 * np.pi * (x + 1.0)
        w_psi = 0.5 * np.pi * w
        P, U = np.meshgrid(psi, x, indexing="ij")
        W = np.outer(w_psi * np.sin(psi) ** 2, w)
        c1 = np.cos(theta1) * np.cos(P) + np.sin(theta1) * np.sin(P) * U
        c2 = np.cos(P) * np.cos(theta2) - np.sin(P) * np.sin(theta2) * U
        values = k1(np.arccos(np.clip(c1, -1.0, 1.0))) * k2(np.arccos(np.clip(c2, -1.0, 1.0)))
        estimate = float(np.sum(W * values)) / np.pi
        if previous is not None and abs(estimate - previous) < tol * max(1.0, abs(estimate)):
            return estimate
        previous = estimate
        n *= 2
    raise QuadratureError("SU(2) convolution quadrature did not converge", estimate=previous, nodes=n // 2)


def convolution_check(group: GroupModel, t1: float, t2: float, theta1: float = 0.0, theta2: float = 0.0) -> float:
    """
    |∫_G K_{t1}(g₁g⁻¹) K_{t2}(g g₂) dg - K_{t1+t2}(g₁g₂)| for torus elements g₁, g₂.

    Args:
        group: Gauge group
        t1, t2: Diffusion times > 0
        theta1, theta2: Torus angles of g₁ and g₂

    Returns:
        Absolute deviation between the two sides
    """
    if not (t1 > 0 and t2 > 0):
        raise InvalidParameterError("Diffusion times must be > 0", t1=t1, t2=t2)
    k1 = kernel_function(group, t1)
    k2 = kernel_function(group, t2)
    rhs = kernel_function(group, t1 + t2)(theta1 + theta2)

    if group.kind is GroupKind.U1:
        lhs, _ = torus_mean(
            lambda phi: k1(theta1 - phi) * k2(phi + theta2),
            bandwidth=k1.bandwidth + k2.bandwidth,
            tol=1e-12,
        )
    else:
        lhs = _su2_convolution(k1, k2, theta1, theta2, tol=1e-11)

    deviation = abs(float(lhs) - rhs)
    logger.debug(f"convolution {group} t=({t1}, {t2}): lhs={lhs} rhs={rhs} dev={deviation:.2e}")
    return deviation

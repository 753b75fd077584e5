"""
Perturbative Wilson Loops in Holomorphic Gauge
==============================================

Coefficients of λ₀ⁿ in ⟨tr ρ(hol_γ)⟩ on the plane. The holomorphic-gauge
propagator pulled back to the loop is

    K(t, s) = (1/4π) (z̄(t) - z̄(s)) / (z(t) - z(s)) · z'(t) z'(s)

and the order-n coefficient is a sum over the (2n-1)!! perfect matchings of
2n time-ordered insertions of [simplex integral of Π K] × [Lie factor].

Dependencies:
- numpy: FFT trigonometric interpolation, Gauss–Legendre rules, matrix traces
- scipy: scrambled Sobol sequences for the six-dimensional order-3 integrals
- loguru: debug tracing of matching integrals

Sample Input:
    rep = MatrixRep.for_irrep(GroupModel("SU2").irrep(2))
    wilson_pert_coeff(rep, Circle(), 1)

Expected Output:
    -3π/2 (the loop encloses area π, so -3/2 per unit of ρ = λ₀π)
"""

import itertools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.stats import qmc

from ..config import get_settings
from .asymptotics import PowerSeries, SeriesVariable, asymptotic_series
from .errors import InvalidParameterError, QuadratureError, SelfIntersectionError
from .liegroup import ClassFunction, GroupKind, Irrep, spin_matrices
from .wick import perfect_matchings

MAX_ORDER = 3
DIAGONAL_OFFSET = 1e-6
_CHUNK = 32768


# ============================================
# LOOPS
# ============================================


class LoopKind(str, Enum):
    CIRCLE = "circle"
    POLYPARAM = "polyparam"


class ContourLoop(ABC):
    """Closed curve z(t), t ∈ [0, 1), traversed counter-clockwise."""

    kind: LoopKind

    @abstractmethod
    def position(self, t) -> np.ndarray:
        ...

    @abstractmethod
    def velocity(self, t) -> np.ndarray:
        ...

    @property
    @abstractmethod
    def enclosed_area(self) -> float:
        ...

    def samples(self, n: int) -> List[Tuple[float, complex, complex]]:
        """(t, z(t), z'(t)) at n equally spaced parameters."""
        t = np.arange(n) / n
        return list(zip(t.tolist(), self.position(t).tolist(), self.velocity(t).tolist()))

    @abstractmethod
    def to_dict(self) -> Dict[str, object]:
        ...


@dataclass(frozen=True)
class Circle(ContourLoop):
    center: complex = 0j
    radius: float = 1.0
    kind: LoopKind = field(default=LoopKind.CIRCLE, init=False)

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidParameterError("radius must be > 0", radius=self.radius)

    def position(self, t):
        return self.center + self.radius * np.exp(2j * np.pi * np.asarray(t, dtype=float))

    def velocity(self, t):
        return 2j * np.pi * self.radius * np.exp(2j * np.pi * np.asarray(t, dtype=float))

    @property
    def enclosed_area(self) -> float:
        return math.pi * self.radius**2

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind.value,
            "center": [complex(self.center).real, complex(self.center).imag],
            "radius": self.radius,
            "enclosed_area": self.enclosed_area,
        }


@dataclass(frozen=True, eq=False)
class PolyParam(ContourLoop):
    """
    Smooth closed curve given by trigonometric interpolation of equally spaced samples.

    z(t) = Σ_k c_k e^{2πikt}; the enclosed area is π Σ_k k|c_k|².
    """

    coeffs: np.ndarray
    freqs: np.ndarray
    kind: LoopKind = field(default=LoopKind.POLYPARAM, init=False)

    def __post_init__(self):
        area = self.enclosed_area
        if not area > 0:
            raise InvalidParameterError(
                "loop must enclose a positive area counter-clockwise", enclosed_area=area
            )
        check_simple(self)

    @classmethod
    def from_samples(cls, points: Sequence[complex]) -> "PolyParam":
        z = np.asarray(points, dtype=complex)
        n = len(z)
        if n < 8:
            raise InvalidParameterError("need at least 8 samples of the loop", samples=n)
        coeffs = np.fft.fft(z) / n
        freqs = np.fft.fftfreq(n, d=1.0 / n)
        if n % 2 == 0:
            # split the Nyquist mode symmetrically so z(t) stays the minimal interpolant
            nyq = n // 2
            coeffs = np.append(coeffs, coeffs[nyq] / 2)
            coeffs[nyq] /= 2
            freqs = np.append(freqs, nyq)
            freqs[nyq] = -nyq
        keep = np.abs(coeffs) > 1e-13 * np.abs(coeffs).max()
        return cls(coeffs[keep], freqs[keep].astype(float))

    @classmethod
    def ellipse(cls, a: float, b: float, center: complex = 0j, samples: int = 64) -> "PolyParam":
        if not (a > 0 and b > 0):
            raise InvalidParameterError("semi-axes must be > 0", a=a, b=b)
        t = 2.0 * np.pi * np.arange(samples) / samples
        return cls.from_samples(center + a * np.cos(t) + 1j * b * np.sin(t))

    def _series(self, t, coeffs: np.ndarray):
        t = np.asarray(t, dtype=float)
        flat = t.reshape(-1)
        out = np.empty(flat.shape, dtype=complex)
        for start in range(0, flat.size, _CHUNK):
            chunk = flat[start:start + _CHUNK]
            out[start:start + _CHUNK] = np.exp(2j * np.pi * np.multiply.outer(chunk, self.freqs)) @ coeffs
        out = out.reshape(t.shape)
        return out if out.ndim else complex(out)

    def position(self, t):
        return self._series(t, self.coeffs)

    def velocity(self, t):
        return self._series(t, 2j * np.pi * self.freqs * self.coeffs)

    @property
    def enclosed_area(self) -> float:
        return float(math.pi * np.sum(self.freqs * np.abs(self.coeffs) ** 2))

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind.value,
            "modes": int(len(self.freqs)),
            "enclosed_area": self.enclosed_area,
        }


def check_simple(loop: ContourLoop, samples: int = 512) -> None:
    """
    Reject self-intersecting loops by testing every pair of non-adjacent chords.

    Raises:
        SelfIntersectionError: If two chords of the sampled polygon cross
    """
    z = loop.position(np.arange(samples) / samples)
    a, b = z, np.roll(z, -1)
    d = b - a

    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    # orientation of the endpoints of chord j relative to chord i, all pairs at once
    o1 = cross(d[:, None], a[None, :] - a[:, None])
    o2 = cross(d[:, None], b[None, :] - a[:, None])
    o3 = cross(d[None, :], a[:, None] - a[None, :])
    o4 = cross(d[None, :], b[:, None] - a[None, :])
    hits = (o1 * o2 < 0) & (o3 * o4 < 0)
    idx = np.arange(samples)
    gap = np.abs(idx[:, None] - idx[None, :])
    hits &= (gap > 1) & (gap < samples - 1)
    if hits.any():
        i, j = map(int, np.argwhere(hits)[0])
        raise SelfIntersectionError(
            "loop is not simple", chords=[i, j], t=[i / samples, j / samples]
        )


# ============================================
# REPRESENTATIONS
# ============================================


@dataclass(frozen=True, eq=False)
class MatrixRep:
    """ρ(e_a) for an orthonormal basis of 𝔤; anti-Hermitian with Σ ρ(e_a)² = -c₂·Id."""

    irrep: Irrep
    basis_matrices: np.ndarray

    def __post_init__(self):
        mats = np.asarray(self.basis_matrices, dtype=complex)
        object.__setattr__(self, "basis_matrices", mats)
        for m in mats:
            if not np.allclose(m.conj().T, -m, atol=1e-12):
                raise InvalidParameterError("representation matrices must be anti-Hermitian")
        casimir = np.einsum("aij,ajk->ik", mats, mats)
        target = -self.irrep.casimir * np.eye(self.dim)
        if np.max(np.abs(casimir - target)) > 1e-12 * max(1.0, self.irrep.casimir):
            raise InvalidParameterError("Σ ρ(e_a)² must equal -c₂·Id", label=self.irrep.label)

    @classmethod
    def for_irrep(cls, irrep: Irrep) -> "MatrixRep":
        """SU(2): ρ(e_a) = i√2·J_a/c from spin matrices; U(1): ρ(e) = i·n/c."""
        group = irrep.group
        c = math.sqrt(group.metric_scale)
        if group.kind is GroupKind.SU2:
            mats = 1j * math.sqrt(2.0) * spin_matrices(irrep.label) / c
        else:
            mats = np.array([[[1j * irrep.label / c]]])
        return cls(irrep, mats)

    @property
    def dim(self) -> int:
        return int(self.basis_matrices.shape[1])

    def lie_factor(self, matching: Sequence[Tuple[int, int]]) -> float:
        """tr(ρ(e_{a₁})⋯ρ(e_{a_{2n}})) summed over indices tied together by ``matching``."""
        n_points = 2 * len(matching)
        if n_points == 0:
            return float(self.dim)
        slots = [0] * n_points
        total = 0j
        d = self.basis_matrices.shape[0]
        for labels in itertools.product(range(d), repeat=len(matching)):
            for (i, j), a in zip(matching, labels):
                slots[i] = slots[j] = a
            total += np.trace(reduce(np.matmul, (self.basis_matrices[a] for a in slots)))
        return float(total.real)


# ============================================
# PROPAGATOR
# ============================================


def _kernel_values(loop: ContourLoop, t, s, zt, vt, zs, vs) -> np.ndarray:
    """K(t, s) from precomputed z, z'; near-diagonal s is moved to t ∓ DIAGONAL_OFFSET."""
    d = (t - s + 0.5) % 1.0 - 0.5
    near = np.abs(d) < DIAGONAL_OFFSET
    if np.any(near):
        shifted = t[near] - np.where(d[near] >= 0, DIAGONAL_OFFSET, -DIAGONAL_OFFSET)
        zs = np.array(zs, copy=True)
        vs = np.array(vs, copy=True)
        zs[near] = loop.position(shifted)
        vs[near] = loop.velocity(shifted)
    return (np.conj(zt) - np.conj(zs)) / (zt - zs) * vt * vs / (4.0 * np.pi)


def hol_propagator_on_loop(loop: ContourLoop, t: float, s: float):
    """
    Pulled-back holomorphic propagator K(t, s).

    At t = s the value is the limit along the curve, taken at offset 1e-6.

    Raises:
        SelfIntersectionError: If z(t) = z(s) for distinct parameters
    """
    for value in (t, s):
        if not 0.0 <= value < 1.0:
            raise InvalidParameterError("loop parameters must lie in [0, 1)", t=t, s=s)
    d = (t - s + 0.5) % 1.0 - 0.5
    if abs(d) >= DIAGONAL_OFFSET:
        gap = abs(complex(loop.position(t)) - complex(loop.position(s)))
        if gap < 1e-12:
            raise SelfIntersectionError("coincident points off the diagonal", t=t, s=s)
    tt, ss = np.array([t], dtype=float), np.array([s], dtype=float)
    value = complex(
        _kernel_values(loop, tt, ss, loop.position(tt), loop.velocity(tt), loop.position(ss), loop.velocity(ss))[0]
    )
    if abs(value.imag) <= 1e-12 * max(1.0, abs(value)):
        return value.real
    return value


# ============================================
# SIMPLEX INTEGRALS
# ============================================


def _simplex_map(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Cube [0,1]^m -> ordered simplex 0 <= t₁ <= … <= t_m <= 1, with Jacobian Π_{k>=2} t_k."""
    t = np.empty_like(u)
    m = u.shape[0]
    t[m - 1] = u[m - 1]
    for k in range(m - 2, -1, -1):
        t[k] = u[k] * t[k + 1]
    return t, np.prod(t[1:], axis=0)


def _gauss_legendre_cube(dim: int, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    x, w = (x + 1.0) / 2.0, w / 2.0
    grids = np.meshgrid(*([x] * dim), indexing="ij")
    weights = reduce(np.multiply.outer, [w] * dim)
    return np.stack([g.reshape(-1) for g in grids]), np.asarray(weights).reshape(-1)


def _matching_integrals(loop: ContourLoop, matchings, points: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Σ weights · Jacobian · Π_{(i,j)} K(t_j, t_i) for each matching, on cube points."""
    t, jac = _simplex_map(points)
    z = [loop.position(row) for row in t]
    v = [loop.velocity(row) for row in t]
    values = []
    for matching in matchings:
        integrand = jac.astype(complex)
        for i, j in matching:
            integrand = integrand * _kernel_values(loop, t[j], t[i], z[j], v[j], z[i], v[i])
        values.append(np.sum(weights * integrand))
    return np.array(values)


@dataclass(frozen=True)
class MatchingTerm:
    matching: Tuple[Tuple[int, int], ...]
    integral: complex
    stderr: float
    lie_factor: float

    def to_dict(self) -> Dict[str, object]:
        return {
            "matching": [list(pair) for pair in self.matching],
            "integral": {"real": self.integral.real, "imag": self.integral.imag},
            "stderr": self.stderr,
            "lie_factor": self.lie_factor,
        }


@dataclass(frozen=True)
class PertCoefficient:
    order: int
    value: float
    imag_residue: float
    stderr: float
    method: str
    terms: Tuple[MatchingTerm, ...]

    @property
    def integrals_evaluated(self) -> int:
        return len(self.terms)

    def to_dict(self) -> Dict[str, object]:
        return {
            "order": self.order,
            "value": self.value,
            "stderr": self.stderr,
            "imag_residue": self.imag_residue,
            "method": self.method,
            "integrals_evaluated": self.integrals_evaluated,
            "matchings": [term.to_dict() for term in self.terms],
        }


def wilson_pert_terms(
    rep: MatrixRep,
    loop: ContourLoop,
    order: int,
    nodes: Optional[int] = None,
    qmc_log2: Optional[int] = None,
    seed: Optional[int] = None,
    tol: float = 1e-4,
) -> PertCoefficient:
    """
    Coefficient of λ₀ⁿ in ⟨tr ρ(hol_γ)⟩ with its per-matching breakdown.

    Orders 1 and 2 use tensor Gauss–Legendre on the ordered simplex and compare
    against a half-resolution grid for the error estimate. Order 3 averages
    scrambled Sobol replicates and reports their standard error.

    Args:
        rep: Representation matrices
        loop: Simple closed loop
        order: n in 0..3
        nodes: Gauss–Legendre nodes per axis (default from Settings by dimension)
        qmc_log2: log2 of Sobol points per replicate for order 3
        seed: Root seed for the Sobol scrambling
        tol: Relative error allowed for the deterministic rules

    Raises:
        InvalidParameterError: If order is outside 0..3
        QuadratureError: If the deterministic rule has not converged
    """
    if int(order) != order or not 0 <= order <= MAX_ORDER:
        raise InvalidParameterError(f"perturbative order must be in [0, {MAX_ORDER}]", order=order)
    if order == 0:
        return PertCoefficient(0, float(rep.dim), 0.0, 0.0, "exact", ())

    settings = get_settings()
    matchings = perfect_matchings(2 * order)
    dim = 2 * order

    if order <= 2:
        nodes = nodes or (settings.PERT_GL_NODES_2D if order == 1 else settings.PERT_GL_NODES_4D)
        fine = _matching_integrals(loop, matchings, *_gauss_legendre_cube(dim, nodes))
        coarse = _matching_integrals(loop, matchings, *_gauss_legendre_cube(dim, max(2, nodes // 2)))
        errors = np.abs(fine - coarse)
        scale = np.maximum(1.0, np.abs(fine))
        if np.any(errors > tol * scale):
            raise QuadratureError(
                "Simplex quadrature did not converge; raise the node count",
                estimate=[float(x.real) for x in fine], nodes=nodes, change=float(errors.max()),
            )
        estimates, stderrs, method = fine, errors, f"gauss-legendre-{nodes}^{dim}"
    else:
        log2 = qmc_log2 or settings.PERT_QMC_LOG2
        seed = settings.DEFAULT_SEED if seed is None else seed
        replicates = []
        for child in np.random.SeedSequence(seed).spawn(settings.PERT_QMC_REPLICATES):
            sampler = qmc.Sobol(d=dim, scramble=True, seed=np.random.default_rng(child))
            points = sampler.random_base2(m=log2).T
            weights = np.full(points.shape[1], 1.0 / points.shape[1])
            replicates.append(_matching_integrals(loop, matchings, points, weights))
        stack = np.array(replicates)
        estimates = stack.mean(axis=0)
        spread = stack.real.std(axis=0, ddof=1) + 1j * stack.imag.std(axis=0, ddof=1)
        stderrs = np.abs(spread) / math.sqrt(len(replicates))
        method = f"sobol-{settings.PERT_QMC_REPLICATES}x2^{log2}"

    terms = []
    for matching, integral, err in zip(matchings, estimates, stderrs):
        terms.append(MatchingTerm(tuple(matching), complex(integral), float(err), rep.lie_factor(matching)))
        logger.debug(f"order {order} matching {matching}: integral {complex(integral):.10g}")

    # hol = 𝒫exp(-∫A) contributes (-1)^{2n} = +1; the order-1 term -c₂·dim·|R|/2 fixes this sign
    value = math.fsum(term.integral.real * term.lie_factor for term in terms)
    imag = abs(math.fsum(term.integral.imag * term.lie_factor for term in terms))
    stderr = math.sqrt(math.fsum((term.stderr * term.lie_factor) ** 2 for term in terms))
    return PertCoefficient(order, value, imag, stderr, method, tuple(terms))


def wilson_pert_coeff(rep: MatrixRep, loop: ContourLoop, order: int, **options) -> float:
    """Coefficient of λ₀ⁿ in the perturbative Wilson loop; real."""
    return wilson_pert_terms(rep, loop, order, **options).value


# ============================================
# COMPARISONS
# ============================================


@dataclass(frozen=True)
class PertComparison:
    irrep: Irrep
    loop: Dict[str, object]
    enclosed_area: float
    coefficients: Tuple[PertCoefficient, ...]
    pert_series: PowerSeries
    asymptotic: PowerSeries
    tolerance: float

    @property
    def asserted_orders(self) -> Tuple[int, ...]:
        return tuple(n for n in range(len(self.coefficients)) if n <= 2)

    def deviation(self, n: int) -> float:
        return abs(float(self.pert_series.coeffs[n]) - float(self.asymptotic.coeffs[n]))

    @property
    def passed(self) -> bool:
        return all(self.deviation(n) <= self.tolerance for n in self.asserted_orders)

    def to_dict(self) -> Dict[str, object]:
        rows = []
        for n, coeff in enumerate(self.coefficients):
            rows.append({
                "order": n,
                "pert_lambda0": coeff.value,
                "pert_rho": float(self.pert_series.coeffs[n]),
                "stderr_rho": coeff.stderr / self.enclosed_area**n,
                "asymptotic_rho": self.asymptotic.to_dict()["coeffs"][n],
                "deviation": self.deviation(n),
                "asserted": n in self.asserted_orders,
            })
        return {
            "irrep": self.irrep.to_dict(),
            "loop": self.loop,
            "enclosed_area": self.enclosed_area,
            "tolerance": self.tolerance,
            "orders": rows,
            "passed": self.passed,
        }


def decompactified_comparison(
    rep: MatrixRep, loop: ContourLoop, max_order: int, tol: float = 1e-4, **options
) -> PertComparison:
    """
    Perturbative coefficients in units of ρ = λ₀·|R| against the asymptotic series.

    Orders 0..2 are asserted within ``tol``; order 3 is reported only.
    """
    if int(max_order) != max_order or not 0 <= max_order <= MAX_ORDER:
        raise InvalidParameterError(f"max_order must be in [0, {MAX_ORDER}]", max_order=max_order)
    area = loop.enclosed_area
    coefficients = tuple(wilson_pert_terms(rep, loop, n, **options) for n in range(max_order + 1))
    pert = PowerSeries(SeriesVariable.LAMBDA0, [c.value for c in coefficients]).scaled(
        1.0 / area, SeriesVariable.RHO
    )
    f = ClassFunction.character(rep.irrep)
    series = asymptotic_series(rep.irrep.group, f, max_order)
    return PertComparison(rep.irrep, loop.to_dict(), area, coefficients, pert, series, tol)


@dataclass(frozen=True)
class AreaIndependence:
    order: int
    values: Tuple[float, ...]
    areas: Tuple[float, ...]
    spread: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.spread <= self.tolerance

    def to_dict(self) -> Dict[str, object]:
        return {
            "order": self.order,
            "values_rho": list(self.values),
            "areas": list(self.areas),
            "spread": self.spread,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def area_independence_check(
    rep: MatrixRep, loops: Sequence[ContourLoop], order: int = 1, tol: float = 1e-3, **options
) -> AreaIndependence:
    """Order-n coefficients in ρ units must not depend on the loop's shape."""
    if len(loops) < 2:
        raise InvalidParameterError("need at least two loops to compare")
    values = tuple(
        wilson_pert_coeff(rep, loop, order, **options) / loop.enclosed_area**order for loop in loops
    )
    return AreaIndependence(
        order=order,
        values=values,
        areas=tuple(loop.enclosed_area for loop in loops),
        spread=max(values) - min(values),
        tolerance=tol,
    )

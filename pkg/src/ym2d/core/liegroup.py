"""
Compact Gauge Groups for ym2d
=============================

U(1) and SU(2) with their irreducible representations, characters, quadratic
Casimirs, Weyl integration data and the structure-constant identities used by
the perturbative expansion.

Conventions:
- ``metric_scale`` is the factor c² multiplying the reference inner product.
  SU(2): <X, Y> = -c² tr(XY) in the defining representation, so the torus
  generator I = diag(i, -i) has |θI|² = 2c²θ². U(1): |θ|² = c²θ².
- SU(2) irreps are labelled by dimension m >= 1 with torus weights
  m-1, m-3, ..., -(m-1) and c₂(m) = (m² - 1) / (2c²).
- U(1) irreps are labelled by charge n with c₂(n) = n² / c².
- Torus coordinate θ parametrizes exp(θ·generator); Haar measure on the torus
  is dθ / 2π.

Dependencies:
- numpy: vectorized characters, torus quadrature, basis matrices (https://numpy.org/)
- loguru: debug tracing of refinement levels

Sample Input:
    su2 = GroupModel(GroupKind.SU2)
    enumerate_irreps(su2, 4.0)

Expected Output:
    [Irrep(SU2, 1), Irrep(SU2, 2), Irrep(SU2, 3)]
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from ..config import get_settings
from .errors import InvalidParameterError, QuadratureError, UnsupportedGroupError

ArrayLike = Union[float, np.ndarray]


class GroupKind(str, Enum):
    """Supported gauge groups."""

    U1 = "U1"
    SU2 = "SU2"


_ALIASES = {
    "U1": GroupKind.U1,
    "U(1)": GroupKind.U1,
    "SU2": GroupKind.SU2,
    "SU(2)": GroupKind.SU2,
}


@dataclass(frozen=True)
class GroupModel:
    """A compact rank-1 gauge group with a rescaled ad-invariant metric."""

    kind: GroupKind
    metric_scale: float = 1.0

    def __post_init__(self):
        if not isinstance(self.kind, GroupKind):
            key = str(self.kind).strip().upper()
            if key not in _ALIASES:
                raise UnsupportedGroupError(
                    f"Unsupported group: {self.kind!r}", supported=[k.value for k in GroupKind]
                )
            object.__setattr__(self, "kind", _ALIASES[key])
        scale = float(self.metric_scale)
        if not math.isfinite(scale) or scale <= 0:
            raise InvalidParameterError(
                "metric_scale must be a positive finite number", metric_scale=self.metric_scale
            )
        object.__setattr__(self, "metric_scale", scale)

    @classmethod
    def parse(cls, name: str, metric_scale: float = 1.0) -> "GroupModel":
        return cls(name, metric_scale)

    @property
    def torus_dim(self) -> int:
        return 1

    @property
    def weyl_order(self) -> int:
        return 2 if self.kind is GroupKind.SU2 else 1

    @property
    def dim_g(self) -> int:
        return 3 if self.kind is GroupKind.SU2 else 1

    @property
    def generator_norm_sq(self) -> float:
        """|generator|² of the torus direction, so |θ·generator|² = q θ²."""
        return 2.0 * self.metric_scale if self.kind is GroupKind.SU2 else self.metric_scale

    @property
    def root_power(self) -> int:
        """Number of positive roots; J(θ) grows like θ^(2·root_power)."""
        return 1 if self.kind is GroupKind.SU2 else 0

    def irrep(self, label: int) -> "Irrep":
        return Irrep(self, label)

    def trivial(self) -> "Irrep":
        return Irrep(self, 1 if self.kind is GroupKind.SU2 else 0)

    def adjoint(self) -> "Irrep":
        return Irrep(self, 3 if self.kind is GroupKind.SU2 else 0)

    def casimir_of_label(self, x: ArrayLike) -> ArrayLike:
        """Casimir as a function of a (possibly continuous) label, for tail bounds."""
        if self.kind is GroupKind.SU2:
            return (np.asarray(x, dtype=float) ** 2 - 1.0) / (2.0 * self.metric_scale)
        return np.asarray(x, dtype=float) ** 2 / self.metric_scale

    def to_dict(self) -> Dict[str, object]:
        return {"group": self.kind.value, "metric_scale": self.metric_scale}

    def __str__(self) -> str:
        return self.kind.value


@dataclass(frozen=True)
class Irrep:
    """Irreducible representation: SU(2) by dimension m, U(1) by charge n."""

    group: GroupModel
    label: int

    def __post_init__(self):
        if isinstance(self.label, bool) or int(self.label) != self.label:
            raise InvalidParameterError("Irrep label must be an integer", label=self.label)
        object.__setattr__(self, "label", int(self.label))
        if self.group.kind is GroupKind.SU2 and self.label < 1:
            raise InvalidParameterError("SU(2) irreps are labelled by dimension m >= 1", label=self.label)

    @property
    def dim(self) -> int:
        return self.label if self.group.kind is GroupKind.SU2 else 1

    @property
    def casimir(self) -> float:
        return float(self.group.casimir_of_label(self.label))

    @property
    def weights(self) -> Tuple[int, ...]:
        if self.group.kind is GroupKind.SU2:
            return tuple(range(self.label - 1, -self.label, -2))
        return (self.label,)

    @property
    def is_trivial(self) -> bool:
        return self.weights == (0,)

    def to_dict(self) -> Dict[str, object]:
        return {"group": self.group.kind.value, "label": self.label}

    def __repr__(self) -> str:
        return f"Irrep({self.group.kind.value}, {self.label})"


@dataclass(frozen=True)
class ClassFunction:
    """Finite linear combination of irreducible characters."""

    terms: Tuple[Tuple[Irrep, float], ...]
    _weights: Dict[int, float] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        terms = tuple((irrep, coeff) for irrep, coeff in self.terms)
        if not terms:
            raise InvalidParameterError("ClassFunction needs at least one term")
        groups = {irrep.group for irrep, _ in terms}
        if len(groups) != 1:
            raise InvalidParameterError(
                "All irreps of a ClassFunction must belong to one group",
                groups=[str(g) for g in groups],
            )
        object.__setattr__(self, "terms", terms)
        weights: Dict[int, float] = {}
        for irrep, coeff in terms:
            for w in irrep.weights:
                weights[w] = weights.get(w, 0) + coeff
        object.__setattr__(self, "_weights", {w: c for w, c in sorted(weights.items()) if c != 0})

    @classmethod
    def character(cls, irrep: Irrep, coeff: float = 1) -> "ClassFunction":
        return cls(((irrep, coeff),))

    @classmethod
    def parse(cls, group: GroupModel, text: str) -> "ClassFunction":
        """
        Parse "2" (χ₂) or "2:1,3:-0.5" (χ₂ - ½χ₃) into a ClassFunction.

        Raises:
            InvalidParameterError: On malformed terms
        """
        terms = []
        for chunk in str(text).split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            label_text, _, coeff_text = chunk.partition(":")
            try:
                label = int(label_text)
                coeff = float(coeff_text) if coeff_text else 1
            except ValueError as e:
                raise InvalidParameterError(f"Malformed class function term {chunk!r}") from e
            terms.append((Irrep(group, label), coeff))
        return cls(tuple(terms))

    @property
    def group(self) -> GroupModel:
        return self.terms[0][0].group

    def weight_coefficients(self) -> Dict[int, float]:
        """Coefficients a_w with f(exp θ·generator) = Σ_w a_w e^{iwθ}."""
        return dict(self._weights)

    @property
    def max_weight(self) -> int:
        return max((abs(w) for w in self._weights), default=0)

    def evaluate(self, theta: ArrayLike) -> ArrayLike:
        """Value at exp(θ·generator); real for SU(2), complex for U(1)."""
        theta = np.asarray(theta, dtype=float)
        values = sum(
            coeff * character_at(irrep, theta) for irrep, coeff in self.terms
        )
        return values

    def even_part(self, theta: ArrayLike) -> ArrayLike:
        """Σ_w a_w cos(wθ): all that survives integration against even densities."""
        theta = np.asarray(theta, dtype=float)
        total = np.zeros_like(theta)
        for w, a in self._weights.items():
            total = total + float(a) * np.cos(w * theta)
        return total

    def at_identity(self) -> float:
        return sum(coeff * irrep.dim for irrep, coeff in self.terms)

    def is_constant(self) -> bool:
        return set(self._weights) <= {0}

    def to_dict(self) -> Dict[str, object]:
        return {
            "group": self.group.kind.value,
            "terms": [{"label": irrep.label, "coeff": coeff} for irrep, coeff in self.terms],
        }


def enumerate_irreps(group: GroupModel, casimir_cutoff: float) -> List[Irrep]:
    """
    All irreps with c₂ <= cutoff, sorted by (casimir, label).

    Args:
        group: Gauge group
        casimir_cutoff: Non-negative Casimir bound

    Returns:
        Complete finite list of irreps below the cutoff

    Raises:
        InvalidParameterError: If the cutoff is negative
        UnsupportedGroupError: If the group kind is unknown
    """
    if not casimir_cutoff >= 0:
        raise InvalidParameterError("casimir_cutoff must be >= 0", casimir_cutoff=casimir_cutoff)

    c2 = group.metric_scale
    if group.kind is GroupKind.SU2:
        # one label of slack past the rounded bound; the filter below is exact
        top = int(math.sqrt(2.0 * c2 * casimir_cutoff + 1.0)) + 1
        labels = range(1, top + 1)
    elif group.kind is GroupKind.U1:
        top = int(math.sqrt(c2 * casimir_cutoff)) + 1
        labels = range(-top, top + 1)
    else:  # pragma: no cover
        raise UnsupportedGroupError(f"Unsupported group: {group.kind}")

    irreps = [Irrep(group, lab) for lab in labels]
    irreps = [r for r in irreps if r.casimir <= casimir_cutoff * (1 + 1e-14)]
    return sorted(irreps, key=lambda r: (r.casimir, r.label))


def character_at(irrep: Irrep, theta: ArrayLike) -> ArrayLike:
    """
    χ_ρ(exp θ·generator) as the closed exponential sum over torus weights.

    SU(2) values are returned as real numbers, U(1) values as complex.
    """
    theta_arr = np.asarray(theta, dtype=float)
    weights = np.asarray(irrep.weights, dtype=float)
    phases = np.exp(1j * np.multiply.outer(theta_arr, weights)).sum(axis=-1)
    if irrep.group.kind is GroupKind.SU2:
        phases = phases.real
    return phases if phases.ndim else phases.item()


def weyl_densities(group: GroupModel, theta: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """
    (J(Y), j(exp Y)) for Y = θ·generator.

    SU(2) has the single positive root α(θI) = 2iθ, giving J = (2θ)² and
    j = |e^{iθ} - e^{-iθ}|² = 4 sin²θ. U(1) has none, so both are 1.

    Both are taken at unit metric scale whatever ``group.metric_scale`` is.
    j is the Haar density, which does not depend on the metric. J only enters
    self-normalized Gaussian averages, where the constant factor c² cancels.
    """
    theta = np.asarray(theta, dtype=float)
    if group.kind is GroupKind.SU2:
        J = (2.0 * theta) ** 2
        j = 4.0 * np.sin(theta) ** 2
    else:
        J = np.ones_like(theta)
        j = np.ones_like(theta)
    if theta.ndim == 0:
        return float(J), float(j)
    return J, j


def torus_mean(
    func: Callable[[np.ndarray], np.ndarray],
    *,
    bandwidth: int = 0,
    tol: Optional[float] = None,
    max_nodes: Optional[int] = None,
) -> Tuple[Union[float, complex], int]:
    """
    (1/2π)∫_0^{2π} func dθ by trapezoid with dyadic node refinement.

    Converges when two successive refinements change the estimate by less than
    ``tol``. ``bandwidth`` is the highest Fourier mode the caller knows about;
    the first level always has more nodes than twice that, which rules out
    aliasing for trigonometric polynomials.

    Returns:
        (estimate, nodes used)

    Raises:
        QuadratureError: If ``max_nodes`` is reached first
    """
    settings = get_settings()
    tol = settings.TORUS_TOL if tol is None else tol
    max_nodes = settings.QUAD_BUDGET if max_nodes is None else max_nodes

    n = 16
    while n <= 2 * bandwidth:
        n *= 2
    if n > max_nodes:
        raise QuadratureError(
            "Integrand bandwidth exceeds the quadrature budget",
            estimate=None, nodes=n, change=None, bandwidth=bandwidth,
        )

    total = np.sum(func(2.0 * np.pi * np.arange(n) / n))
    estimate = total / n
    change = math.inf
    while n < max_nodes:
        midpoints = 2.0 * np.pi * (np.arange(n) + 0.5) / n
        total = total + np.sum(func(midpoints))
        n *= 2
        refined = total / n
        change = abs(refined - estimate)
        estimate = refined
        if change < tol:
            logger.debug(f"torus_mean converged with {n} nodes (change {change:.2e})")
            return _as_scalar(estimate), n

    raise QuadratureError(
        "Torus quadrature did not converge",
        estimate=_jsonable(_as_scalar(estimate)), nodes=n, change=float(change),
    )


def weyl_integrate(
    group: GroupModel,
    f: Callable[[np.ndarray], np.ndarray],
    *,
    bandwidth: int = 0,
    tol: Optional[float] = None,
    max_nodes: Optional[int] = None,
) -> Union[float, complex]:
    """
    ∫_G f dg for a class function given on the torus, by the Weyl formula.

    Computes (1/|W|)∫_H f(h) j(h) dh with normalized Haar measure on H.

    Args:
        group: Gauge group
        f: Vectorized callback θ -> f(exp θ·generator)
        bandwidth: Highest torus weight present in f (j adds 2 for SU(2))
        tol: Refinement tolerance, default ``Settings.TORUS_TOL``
        max_nodes: Node budget, default ``Settings.QUAD_BUDGET``

    Returns:
        The integral; complex only if the imaginary part is not negligible

    Raises:
        QuadratureError: On non-convergence, with the achieved estimate
    """

    def integrand(theta: np.ndarray) -> np.ndarray:
        _, j = weyl_densities(group, theta)
        return f(theta) * j

    extra = 2 if group.kind is GroupKind.SU2 else 0
    value, _ = torus_mean(integrand, bandwidth=bandwidth + extra, tol=tol, max_nodes=max_nodes)
    return value / group.weyl_order


def fusion_multiplicity(group: GroupModel, a: int, b: int, c: int) -> int:
    """
    ∫_G χ_a χ_b χ_c dg: multiplicity of the trivial irrep in a ⊗ b ⊗ c.

    SU(2): 1 iff |a-b|+1 <= c <= a+b-1 and a+b+c is odd. U(1): 1 iff a+b+c = 0.
    """
    if group.kind is GroupKind.SU2:
        if min(a, b, c) < 1:
            raise InvalidParameterError("SU(2) labels must be >= 1", labels=[a, b, c])
        return int(abs(a - b) + 1 <= c <= a + b - 1 and (a + b + c) % 2 == 1)
    return int(a + b + c == 0)


# ============================================
# LIE ALGEBRA DATA
# ============================================

_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# Relative weights of the leading logarithmic singularity of diagrams (I), (II₁),
# (II₂), (III); weighted by their Lie factors they sum to zero.
SINGULAR_WEIGHTS = {"I": 0.5, "II_1": -0.25, "II_2": -0.25, "III": -0.5}


def lie_algebra_basis(group: GroupModel) -> np.ndarray:
    """Orthonormal basis {e_a} of 𝔤 in the defining representation, shape (d, n, n)."""
    if group.kind is GroupKind.SU2:
        return 1j * _PAULI / math.sqrt(2.0 * group.metric_scale)
    return np.array([[[1j / math.sqrt(group.metric_scale)]]])


def inner_product(group: GroupModel, X: np.ndarray, Y: np.ndarray) -> float:
    """<X, Y> = -c² tr(XY)."""
    return float((-group.metric_scale * np.trace(X @ Y)).real)


def spin_matrices(m: int) -> np.ndarray:
    """Hermitian spin matrices (J_x, J_y, J_z) of the m-dimensional SU(2) irrep."""
    if m < 1:
        raise InvalidParameterError("dimension must be >= 1", m=m)
    j = (m - 1) / 2.0
    mz = j - np.arange(m)
    jz = np.diag(mz).astype(complex)
    jp = np.zeros((m, m), dtype=complex)
    for k in range(1, m):
        # <mz_{k-1}| J+ |mz_k>
        jp[k - 1, k] = math.sqrt(j * (j + 1) - mz[k] * (mz[k] + 1))
    jm = jp.conj().T
    jx = (jp + jm) / 2.0
    jy = (jp - jm) / 2j
    return np.array([jx, jy, jz])


@dataclass
class LieIdentityReport:
    """Outcome of the structure-constant identity checks."""

    group: GroupModel
    casimir_matrix: np.ndarray
    adjoint_casimir: float
    factors: Dict[str, np.ndarray]
    expected_signs: Dict[str, int]
    deviations: Dict[str, float]
    cancellation_residual: float
    tolerance: float

    @property
    def max_deviation(self) -> float:
        return max(list(self.deviations.values()) + [self.cancellation_residual])

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance

    def to_dict(self) -> Dict[str, object]:
        return {
            "group": self.group.to_dict(),
            "casimir_matrix": self.casimir_matrix.tolist(),
            "adjoint_casimir": self.adjoint_casimir,
            "expected_signs": dict(self.expected_signs),
            "deviations": dict(self.deviations),
            "cancellation_residual": self.cancellation_residual,
            "tolerance": self.tolerance,
            "max_deviation": self.max_deviation,
            "passed": self.passed,
        }


def verify_lie_identities(group: GroupModel, tolerance: float = 1e-12) -> LieIdentityReport:
    """
    Check the Lie-algebraic factors of the second-order diagrams.

    With C_ab = Σ_c <[e_c,[e_c,e_a]], e_b> the identities are
    (I) = C, (II₁) = -C, (II₂) = C, (III) = C and C = -c₂(Ad)·δ.
    """
    basis = lie_algebra_basis(group)
    d = basis.shape[0]

    def ip(X, Y):
        return inner_product(group, X, Y)

    def br(X, Y):
        return X @ Y - Y @ X

    C = np.array(
        [[sum(ip(br(basis[c], br(basis[c], basis[a])), basis[b]) for c in range(d))
          for b in range(d)] for a in range(d)]
    )
    struct = np.array(
        [[[ip(br(basis[a], basis[c]), basis[e]) for e in range(d)] for c in range(d)]
         for a in range(d)]
    )

    factors = {
        "I": np.array([[sum(ip(br(basis[a], basis[c]), br(basis[c], basis[b])) for c in range(d))
                        for b in range(d)] for a in range(d)]),
        "II_1": np.einsum("ace,bce->ab", struct, struct),
        "II_2": -np.array([[sum(struct[a, c, e] * ip(basis[e], br(basis[b], basis[c]))
                                for c in range(d) for e in range(d))
                            for b in range(d)] for a in range(d)]),
        "III": -np.array([[sum(ip(br(basis[a], basis[c]), br(basis[b], basis[c])) for c in range(d))
                           for b in range(d)] for a in range(d)]),
    }
    signs = {"I": 1, "II_1": -1, "II_2": 1, "III": 1}

    adjoint_casimir = group.adjoint().casimir
    deviations = {
        name: float(np.max(np.abs(value - signs[name] * C))) for name, value in factors.items()
    }
    deviations["casimir"] = float(np.max(np.abs(C + adjoint_casimir * np.eye(d))))

    residual = sum(SINGULAR_WEIGHTS[name] * factors[name] for name in SINGULAR_WEIGHTS)
    report = LieIdentityReport(
        group=group,
        casimir_matrix=C,
        adjoint_casimir=adjoint_casimir,
        factors=factors,
        expected_signs=signs,
        deviations=deviations,
        cancellation_residual=float(np.max(np.abs(residual))),
        tolerance=tolerance,
    )
    logger.debug(f"Lie identities for {group}: max deviation {report.max_deviation:.2e}")
    return report


def _as_scalar(value):
    value = complex(value) if np.iscomplexobj(value) else float(value)
    if isinstance(value, complex) and abs(value.imag) <= 1e-13 * max(1.0, abs(value.real)):
        return value.real
    return value


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


if __name__ == "__main__":
    import sys

    all_validation_failures = []
    total_tests = 0

    su2 = GroupModel(GroupKind.SU2)

    total_tests += 1
    labels = [r.label for r in enumerate_irreps(su2, 4.0)]
    if labels != [1, 2, 3]:
        all_validation_failures.append(f"enumerate_irreps: expected [1, 2, 3], got {labels}")

    total_tests += 1
    chi2 = ClassFunction.character(su2.irrep(2))
    norm = weyl_integrate(su2, lambda th: chi2.evaluate(th) ** 2, bandwidth=2)
    if abs(norm - 1.0) > 1e-10:
        all_validation_failures.append(f"Schur orthogonality: expected 1, got {norm}")

    total_tests += 1
    report = verify_lie_identities(su2)
    if not report.passed:
        all_validation_failures.append(f"Lie identities: max deviation {report.max_deviation}")

    if all_validation_failures:
        print(f"❌ VALIDATION FAILED - {len(all_validation_failures)} of {total_tests} tests failed:")
        for failure in all_validation_failures:
            print(f"  - {failure}")
        sys.exit(1)
    print(f"✅ VALIDATION PASSED - All {total_tests} tests produced expected results")
    sys.exit(0)

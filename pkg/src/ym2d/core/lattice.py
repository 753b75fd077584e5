"""
Lattice Yang-Mills: Partition Functions and Wilson Loops
========================================================

Exact engines for closed surfaces and the plane, and an importance-sampled
Monte Carlo oracle over edge variables of a SurfaceMap.

- partition_function: Σ_ρ dim(ρ)^{2-2h} e^{-λ c₂(ρ)/2}.
- wilson_exact_simple: ∫_G f K_{λ₀|R₁|} K_{λ₀|R₂|} dg / K_{λ₀|S²|}(1) by
  torus quadrature, with a fusion-coefficient double sum as a second path.
- wilson_exact_r2: dim(ρ) e^{-λ₀|R| c₂(ρ)/2} (the unbounded region carries K_∞ ≡ 1).
- graph_expectation_mc: edge variables on a spanning tree are gauge-fixed to
  the identity; the face holonomies of all faces except a root face are drawn
  from their heat kernels along a dual spanning tree (the edge closing each face
  is solved for), the 2·genus remaining edges are Haar distributed, and the
  importance weight is the root face kernel.

Dependencies:
- numpy: quaternion arithmetic, RNG streams via SeedSequence (https://numpy.org/)
- scipy: cumulative trapezoid for inverse-CDF sampling of class angles
- concurrent.futures: chunk-parallel sampling with order-independent merging

Sample Input:
    su2 = GroupModel("SU2")
    cfg = LoopConfig.sphere(0.5, 0.5, ClassFunction.character(su2.irrep(2)))
    wilson_exact_simple(su2, cfg, lam0=0.5)

Expected Output:
    the exact ⟨χ₂⟩; graph_expectation_mc on sphere_one_edge(1/2, 1/2)
    reproduces it within 3 standard errors
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from loguru import logger
from scipy.integrate import cumulative_trapezoid

from ..config import get_settings
from .errors import InvalidParameterError, SamplingError
from .heatkernel import kernel_function, select_label_cutoff
from .liegroup import (
    ClassFunction,
    GroupKind,
    GroupModel,
    Irrep,
    fusion_multiplicity,
    weyl_integrate,
)
from .surface import LoopConfig, SurfaceKind, SurfaceMap, Word
from .utils import ordered_fsum


# ============================================
# EXACT ENGINES
# ============================================


def partition_function(group: GroupModel, genus: int, total_area_coupling: float) -> float:
    """
    Z = Σ_ρ dim(ρ)^{2-2h} e^{-λ c₂(ρ)/2} for a closed genus-h surface.

    Args:
        group: Gauge group
        genus: h >= 0
        total_area_coupling: λ = λ₀|Σ| > 0

    Returns:
        Partition function with tail below ``Settings.TAIL_TOL``

    Raises:
        InvalidParameterError: If λ <= 0 or genus < 0
        TruncationError: If the series cannot be truncated within budget
    """
    lam = float(total_area_coupling)
    if int(genus) != genus or genus < 0:
        raise InvalidParameterError("genus must be a non-negative integer", genus=genus)
    if not lam > 0:
        raise InvalidParameterError("lambda must be > 0", lam=lam)
    if math.isinf(lam):
        return 1.0

    power = 2 - 2 * genus
    cutoff, bound = select_label_cutoff(group, lam, power=power)
    if group.kind is GroupKind.SU2:
        labels = range(1, cutoff + 1)
    else:
        labels = range(-cutoff, cutoff + 1)
    terms = [
        float(r.dim) ** power * math.exp(-lam * r.casimir / 2.0)
        for r in (Irrep(group, lab) for lab in labels)
    ]
    logger.debug(f"Z({group}, h={genus}, λ={lam}): {len(terms)} terms, tail {bound:.2e}")
    return math.fsum(terms)


def plane_partition_function() -> float:
    """On ℝ² the unbounded face carries K_∞ ≡ 1, so Z is identically 1."""
    return 1.0


def _check_sphere(group: GroupModel, cfg: LoopConfig, lam0: float) -> None:
    if cfg.surface is not SurfaceKind.SPHERE:
        raise InvalidParameterError("wilson_exact_simple needs a sphere LoopConfig; use wilson_exact_r2 on the plane")
    if cfg.observable.group != group:
        raise InvalidParameterError("observable belongs to a different group")
    if not lam0 > 0:
        raise InvalidParameterError("lambda0 must be > 0", lam0=lam0)


def wilson_exact_simple(
    group: GroupModel, cfg: LoopConfig, lam0: float, method: str = "quadrature"
) -> float:
    """
    Exact ⟨W_{f,γ}⟩ for a simple closed curve on S².

    Args:
        group: Gauge group
        cfg: Sphere loop configuration (areas |R₁|, |R₂| and observable f)
        lam0: Coupling λ₀ > 0
        method: "quadrature" (Weyl torus integral) or "fusion" (character algebra)

    Returns:
        ∫ f K_{λ₀|R₁|} K_{λ₀|R₂|} dg / K_{λ₀|S²|}(1)
    """
    _check_sphere(group, cfg, lam0)
    if method == "fusion":
        return wilson_fusion_sum(group, cfg, lam0)
    if method != "quadrature":
        raise InvalidParameterError(f"Unknown method {method!r}", choices=["quadrature", "fusion"])

    f = cfg.observable
    r1, r2 = cfg.regions
    k1 = kernel_function(group, lam0 * r1)
    k2 = kernel_function(group, lam0 * r2)
    normalizer = kernel_function(group, lam0 * cfg.total_area)(0.0)

    def integrand(theta):
        return f.even_part(theta) * (k1(theta) * k2(theta))

    numerator = weyl_integrate(
        group, integrand, bandwidth=f.max_weight + k1.bandwidth + k2.bandwidth
    )
    return float(numerator) / normalizer


def _kernel_coefficients(group: GroupModel, t: float) -> Dict[int, float]:
    """label -> dim(ρ) e^{-t c₂(ρ)/2}, the character expansion coefficients of K_t."""
    cutoff, _ = select_label_cutoff(group, t, power=3)
    labels = range(1, cutoff + 1) if group.kind is GroupKind.SU2 else range(-cutoff, cutoff + 1)
    irreps = (Irrep(group, lab) for lab in labels)
    return {r.label: r.dim * math.exp(-t * r.casimir / 2.0) for r in irreps}


def wilson_fusion_sum(group: GroupModel, cfg: LoopConfig, lam0: float) -> float:
    """
    Exact sphere expectation through fusion coefficients.

    ∫ χ_ρ K_{t₁} K_{t₂} = Σ_{a,b} d_a d_b e^{-t₁c₂(a)/2 - t₂c₂(b)/2} N(ρ, a, b), divided
    by K_λ(1) = Σ_a d_a² e^{-λ c₂(a)/2}. This is the character-algebra cross-check of
    the quadrature path.
    """
    _check_sphere(group, cfg, lam0)
    r1, r2 = cfg.regions
    c1 = _kernel_coefficients(group, lam0 * r1)
    c2 = _kernel_coefficients(group, lam0 * r2)

    numerator_terms: List[float] = []
    for irrep, coeff in cfg.observable.terms:
        for a, ka in c1.items():
            if group.kind is GroupKind.SU2:
                # N(ρ, a, b) ≠ 0 only for |a-ρ|+1 <= b <= a+ρ-1
                candidates = range(abs(a - irrep.label) + 1, a + irrep.label)
            else:
                candidates = (-(a + irrep.label),)
            for b in candidates:
                if b in c2 and fusion_multiplicity(group, irrep.label, a, b):
                    numerator_terms.append(coeff * ka * c2[b])
    normalizer = partition_function(group, 0, lam0 * cfg.total_area)
    return math.fsum(numerator_terms) / normalizer


def wilson_exact_r2(group: GroupModel, irrep: Irrep, lam0: float, area: float) -> float:
    """dim(ρ) e^{-λ₀|R| c₂(ρ)/2}: the decompactified Wilson loop."""
    if irrep.group != group:
        raise InvalidParameterError("irrep belongs to a different group")
    if not (lam0 > 0 and area > 0):
        raise InvalidParameterError("lambda0 and area must be > 0", lam0=lam0, area=area)
    return irrep.dim * math.exp(-lam0 * area * irrep.casimir / 2.0)


def wilson_exact_plane(cfg: LoopConfig, lam0: float) -> float:
    """Linear extension of wilson_exact_r2 to a ClassFunction observable."""
    if cfg.surface is not SurfaceKind.PLANE:
        raise InvalidParameterError("wilson_exact_plane needs a plane LoopConfig")
    (area,) = cfg.regions
    group = cfg.observable.group
    return math.fsum(
        coeff * wilson_exact_r2(group, irrep, lam0, area) for irrep, coeff in cfg.observable.terms
    )


# ============================================
# GROUP ELEMENT ARRAYS
# ============================================


class _Quaternions:
    """SU(2) as unit quaternions (a, b, c, d), arrays of shape (n, 4)."""

    @staticmethod
    def identity(n: int) -> np.ndarray:
        out = np.zeros((n, 4))
        out[:, 0] = 1.0
        return out

    @staticmethod
    def mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        a1, b1, c1, d1 = x.T
        a2, b2, c2, d2 = y.T
        return np.stack(
            [
                a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            ],
            axis=1,
        )

    @staticmethod
    def inv(x: np.ndarray) -> np.ndarray:
        return x * np.array([1.0, -1.0, -1.0, -1.0])

    @staticmethod
    def angle(x: np.ndarray) -> np.ndarray:
        return np.arctan2(np.linalg.norm(x[:, 1:], axis=1), x[:, 0])

    @staticmethod
    def haar(rng: np.random.Generator, n: int) -> np.ndarray:
        v = rng.standard_normal((n, 4))
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    @staticmethod
    def heat(rng: np.random.Generator, n: int, group: GroupModel, t: float) -> np.ndarray:
        grid, cdf = _su2_angle_cdf(group, t)
        psi = np.interp(rng.random(n), cdf, grid)
        axis = rng.standard_normal((n, 3))
        axis /= np.linalg.norm(axis, axis=1, keepdims=True)
        return np.column_stack([np.cos(psi), np.sin(psi)[:, None] * axis])


class _Angles:
    """U(1) as angles, arrays of shape (n,)."""

    @staticmethod
    def identity(n: int) -> np.ndarray:
        return np.zeros(n)

    @staticmethod
    def mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return x + y

    @staticmethod
    def inv(x: np.ndarray) -> np.ndarray:
        return -x

    @staticmethod
    def angle(x: np.ndarray) -> np.ndarray:
        return np.remainder(x + np.pi, 2.0 * np.pi) - np.pi

    @staticmethod
    def haar(rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(0.0, 2.0 * np.pi, n)

    @staticmethod
    def heat(rng: np.random.Generator, n: int, group: GroupModel, t: float) -> np.ndarray:
        # wrapped normal; its density w.r.t. dθ/2π is exactly K_t
        return rng.normal(0.0, math.sqrt(t / group.metric_scale), n)


@lru_cache(maxsize=64)
def _su2_angle_cdf(group: GroupModel, t: float, nodes: int = 16385) -> Tuple[np.ndarray, np.ndarray]:
    """Tabulated CDF of the class angle ψ with density (2/π) sin²ψ K_t(ψ) on [0, π]."""
    grid = np.linspace(0.0, np.pi, nodes)
    density = np.maximum(np.sin(grid) ** 2 * kernel_function(group, t)(grid), 0.0)
    cdf = cumulative_trapezoid(density, grid, initial=0.0)
    return grid, cdf / cdf[-1]


def _elements(group: GroupModel):
    return _Quaternions if group.kind is GroupKind.SU2 else _Angles


# ============================================
# MONTE CARLO
# ============================================


@dataclass(frozen=True)
class _SamplingPlan:
    group: GroupModel
    tree_edges: Tuple[str, ...]
    haar_edges: Tuple[str, ...]
    # (face index, edge solved from it, sign of that edge in the face) in leaf-first order
    solved_faces: Tuple[Tuple[int, str, int], ...]
    root_face: int
    face_times: Tuple[float, ...]
    face_words: Tuple[Word, ...]
    loop_word: Optional[Word]


def _build_plan(group: GroupModel, smap: SurfaceMap, lam0: float, loop_word: Optional[Word]) -> _SamplingPlan:
    tree = smap.spanning_tree()
    cotree = [e for e in smap.edges if e not in tree]
    face_times = tuple(lam0 * float(face.area) for face in smap.faces)
    # broadest kernel as root keeps the importance weight flattest
    root = max(range(len(smap.faces)), key=lambda i: (face_times[i], -i))

    # dual spanning tree over faces, BFS from the root through cotree edges
    parent_edge: Dict[int, Tuple[str, int]] = {}
    order = [root]
    visited = {root}
    dual_tree_edges = set()
    frontier = [root]
    while frontier:
        next_frontier = []
        for face in frontier:
            for edge in cotree:
                (fp, _), (fm, _) = smap.faces_of_edge(edge)
                if face not in (fp, fm) or fp == fm:
                    continue
                other = fm if face == fp else fp
                if other in visited:
                    continue
                visited.add(other)
                dual_tree_edges.add(edge)
                sign = 1 if other == fp else -1
                parent_edge[other] = (edge, sign)
                order.append(other)
                next_frontier.append(other)
        frontier = next_frontier

    haar_edges = tuple(e for e in cotree if e not in dual_tree_edges)
    if len(haar_edges) != 2 * smap.genus:  # pragma: no cover
        raise InvalidParameterError("surface map is not connected", haar_edges=len(haar_edges))

    solved = tuple((f, parent_edge[f][0], parent_edge[f][1]) for f in reversed(order[1:]))
    return _SamplingPlan(
        group=group,
        tree_edges=tree,
        haar_edges=haar_edges,
        solved_faces=solved,
        root_face=root,
        face_times=face_times,
        face_words=tuple(face.word for face in smap.faces),
        loop_word=loop_word,
    )


def _holonomy(ops, values: Dict[str, np.ndarray], word: Word, n: int) -> np.ndarray:
    result = ops.identity(n)
    for edge, sign in word:
        g = values[edge]
        result = ops.mul(result, g if sign > 0 else ops.inv(g))
    return result


@dataclass(frozen=True)
class _ChunkSums:
    n: int
    sw: float
    sw2: float
    swf: float
    sw2f: float
    sw2f2: float


def _sample_chunk(
    plan: _SamplingPlan, observable: Optional[ClassFunction], seed: np.random.SeedSequence, n: int
) -> _ChunkSums:
    group = plan.group
    ops = _elements(group)
    rng = np.random.default_rng(seed)

    values: Dict[str, np.ndarray] = {e: ops.identity(n) for e in plan.tree_edges}
    for edge in plan.haar_edges:
        values[edge] = ops.haar(rng, n)

    for face, edge, sign in plan.solved_faces:
        target = ops.heat(rng, n, group, plan.face_times[face])
        word = plan.face_words[face]
        pos = next(i for i, (e, s) in enumerate(word) if e == edge and s == sign)
        left = _holonomy(ops, values, word[:pos], n)
        right = _holonomy(ops, values, word[pos + 1:], n)
        solved = ops.mul(ops.mul(ops.inv(left), target), ops.inv(right))
        values[edge] = solved if sign > 0 else ops.inv(solved)

    root_hol = _holonomy(ops, values, plan.face_words[plan.root_face], n)
    w = kernel_function(group, plan.face_times[plan.root_face])(ops.angle(root_hol))
    if plan.loop_word is not None and observable is not None:
        f = observable.even_part(ops.angle(_holonomy(ops, values, plan.loop_word, n)))
    else:
        f = np.ones(n)

    w2 = w * w
    return _ChunkSums(
        n=n,
        sw=math.fsum(w.tolist()),
        sw2=math.fsum(w2.tolist()),
        swf=math.fsum((w * f).tolist()),
        sw2f=math.fsum((w2 * f).tolist()),
        sw2f2=math.fsum((w2 * f * f).tolist()),
    )


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: float
    stderr: float
    partition_estimate: float
    partition_stderr: float
    ess: float
    samples: int
    chunks: int
    gauge_fixed_edges: int
    seed: int

    def to_dict(self) -> Dict[str, object]:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "partition_estimate": self.partition_estimate,
            "partition_stderr": self.partition_stderr,
            "ess": self.ess,
            "samples": self.samples,
            "chunks": self.chunks,
            "gauge_fixed_edges": self.gauge_fixed_edges,
            "seed": self.seed,
        }


def graph_expectation_mc(
    group: GroupModel,
    smap: SurfaceMap,
    lam0: float,
    loop: Union[str, Word, None] = None,
    observable: Optional[ClassFunction] = None,
    samples: int = 100_000,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> MonteCarloResult:
    """
    Importance-sampled ⟨W_{f,γ}⟩ on a SurfaceMap.

    Chunks of fixed size draw from child streams of ``SeedSequence(seed)`` and
    their sums are merged in chunk order with ``math.fsum``, so the result is
    identical for any number of workers.

    Args:
        group: Gauge group
        smap: Closed surface map
        lam0: Coupling λ₀
        loop: Loop name on the map or an explicit edge word; None for no observable
        observable: Class function f; None means f ≡ 1
        samples: Number of samples (>= ``Settings.MC_MIN_SAMPLES``)
        seed: Root seed, default ``Settings.DEFAULT_SEED``
        workers: Thread count, default ``Settings.MC_WORKERS``

    Returns:
        MonteCarloResult with the ratio estimate, its delta-method standard
        error, and the mean weight as an estimate of Z for the map

    Raises:
        InvalidParameterError: Too few samples or faces below the coupling floor
        SamplingError: Effective sample size below ``Settings.MC_MIN_ESS_FRACTION``
    """
    settings = get_settings()
    seed = settings.DEFAULT_SEED if seed is None else int(seed)
    workers = settings.MC_WORKERS if workers is None else int(workers)

    if samples < settings.MC_MIN_SAMPLES:
        raise InvalidParameterError(
            f"Monte Carlo needs at least {settings.MC_MIN_SAMPLES} samples", samples=samples
        )
    small = [i for i, face in enumerate(smap.faces) if lam0 * float(face.area) < settings.MC_MIN_FACE_COUPLING]
    if small:
        raise InvalidParameterError(
            "face coupling lambda0*|F| below the sampling floor",
            faces=small, floor=settings.MC_MIN_FACE_COUPLING,
        )
    if observable is not None and observable.group != group:
        raise InvalidParameterError("observable belongs to a different group")

    if isinstance(loop, str):
        loop_word: Optional[Word] = smap.loop(loop)
    elif loop is not None:
        loop_word = tuple((str(e), int(s)) for e, s in loop)
        smap._check_closed_path("<word>", loop_word)
    else:
        loop_word = None

    plan = _build_plan(group, smap, lam0, loop_word)
    chunk = settings.MC_CHUNK_SIZE
    sizes = [chunk] * (samples // chunk) + ([samples % chunk] if samples % chunk else [])
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    logger.debug(
        f"MC {group}: {samples} samples in {len(sizes)} chunks, tree={len(plan.tree_edges)} "
        f"haar={len(plan.haar_edges)} solved={len(plan.solved_faces)} root={plan.root_face}"
    )

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda args: _sample_chunk(plan, observable, *args), zip(seeds, sizes)))

    sw = ordered_fsum(p.sw for p in parts)
    sw2 = ordered_fsum(p.sw2 for p in parts)
    swf = ordered_fsum(p.swf for p in parts)
    sw2f = ordered_fsum(p.sw2f for p in parts)
    sw2f2 = ordered_fsum(p.sw2f2 for p in parts)

    ess = sw * sw / sw2 if sw2 > 0 else 0.0
    if ess < settings.MC_MIN_ESS_FRACTION * samples:
        raise SamplingError(
            "Effective sample size collapsed; reparametrize the map (subdivide large faces "
            "or choose a different root)",
            ess=ess, samples=samples,
        )

    ratio = swf / sw
    variance = (sw2f2 - 2.0 * ratio * sw2f + ratio * ratio * sw2) / (sw * sw)
    mean_w = sw / samples
    z_var = max(sw2 / samples - mean_w * mean_w, 0.0) / samples

    return MonteCarloResult(
        estimate=ratio,
        stderr=math.sqrt(max(variance, 0.0)),
        partition_estimate=mean_w,
        partition_stderr=math.sqrt(z_var),
        ess=ess,
        samples=samples,
        chunks=len(sizes),
        gauge_fixed_edges=len(plan.tree_edges),
        seed=seed,
    )

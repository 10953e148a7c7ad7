"""
Wedges, deformed wedges and strips under Killing flows on Minkowski and Kruskal charts
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from config import get_settings
from .errors import (
    AmbiguousRoot,
    DifferentSpheres,
    EmptySample,
    LeavesChart,
    OutsideChart,
    RootNotBracketed,
)
from .linalg_utils import make_rng

logger = logging.getLogger(__name__)

ChartTag = Literal["minkowski_boost", "minkowski_translation", "kruskal_time"]
Profile = Callable[[np.ndarray], np.ndarray]

# Points are arrays (..., d): time, spatial/radial coordinate, transverse label.
# Minkowski: (x0, x1, x2, x3). Kruskal: (t, x, Ω₁, Ω₂, Ω₃).


@dataclass(frozen=True)
class MinkowskiPoint:
    x0: float
    x1: float
    x2: float = 0.0
    x3: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3], dtype=float)

    @classmethod
    def from_array(cls, a: Sequence[float]) -> "MinkowskiPoint":
        return cls(*map(float, a))


@dataclass(frozen=True)
class KruskalPoint:
    t: float
    x: float
    omega: Tuple[float, float, float] = (0.0, 0.0, 1.0)
    mass: float = 1.0

    def __post_init__(self):
        if self.x ** 2 - self.t ** 2 <= -1.0:
            raise OutsideChart(f"x² − t² = {self.x ** 2 - self.t ** 2} ≤ −1")
        if abs(float(np.linalg.norm(self.omega)) - 1.0) > 1e-12:
            raise ValueError("Ω must be a unit 3-vector")

    @property
    def r(self) -> float:
        return schwarzschild_radius(self.t, self.x, self.mass)

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.x, *self.omega], dtype=float)

    @classmethod
    def from_array(cls, a: Sequence[float], mass: float = 1.0) -> "KruskalPoint":
        a = [float(v) for v in a]
        return cls(a[0], a[1], (a[2], a[3], a[4]), mass)


Point = Union[MinkowskiPoint, KruskalPoint, np.ndarray, Sequence[float]]


def _as_points(p: Point) -> np.ndarray:
    if isinstance(p, (MinkowskiPoint, KruskalPoint)):
        return p.as_array()
    return np.asarray(p, dtype=float)


def null_coordinates(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(v, w, transverse) with v = x0 + x1 and w = x1 − x0"""
    points = np.asarray(points, dtype=float)
    return points[..., 0] + points[..., 1], points[..., 1] - points[..., 0], points[..., 2:]


# Profiles on the transverse label


@dataclass(frozen=True)
class ConstantProfile:
    value: float = 0.0

    def __call__(self, y: np.ndarray) -> np.ndarray:
        return np.full(np.shape(y)[:-1], self.value, dtype=float)


@dataclass(frozen=True)
class QuadraticProfile:
    coefficient: float = 0.25

    def __call__(self, y: np.ndarray) -> np.ndarray:
        return self.coefficient * np.sum(np.asarray(y, dtype=float) ** 2, axis=-1)


def _smooth_bump(rho: np.ndarray) -> np.ndarray:
    """exp(1 − 1/(1 − ρ²)) on ρ < 1, zero outside; equals 1 at ρ = 0"""
    rho = np.asarray(rho, dtype=float)
    out = np.zeros_like(rho)
    inside = rho < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - rho[inside] ** 2))
    return out


@dataclass(frozen=True)
class BumpProfile:
    height: float = 1.0
    radius: float = 1.0
    center: Tuple[float, float] = (0.0, 0.0)

    def __call__(self, y: np.ndarray) -> np.ndarray:
        rho = np.linalg.norm(np.asarray(y, dtype=float) - np.asarray(self.center), axis=-1) / self.radius
        return self.height * _smooth_bump(rho)


@dataclass(frozen=True)
class SphereBump:
    """Bump in the angular distance from `axis` on S²"""

    height: float = 1.0
    angular_radius: float = 1.0
    axis: Tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __call__(self, omega: np.ndarray) -> np.ndarray:
        axis = np.asarray(self.axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        angle = np.arccos(np.clip(np.asarray(omega, dtype=float) @ axis, -1.0, 1.0))
        return self.height * _smooth_bump(angle / self.angular_radius)


def profile_from_descriptor(desc: Optional[Dict[str, Any]]) -> Profile:
    if not desc:
        return ConstantProfile(0.0)
    kind = desc.get("type", "constant")
    params = {k: v for k, v in desc.items() if k != "type"}
    for key in ("center", "axis"):
        if key in params:
            params[key] = tuple(params[key])
    builders = {
        "constant": ConstantProfile,
        "quadratic": QuadraticProfile,
        "bump": BumpProfile,
        "sphere_bump": SphereBump,
    }
    if kind not in builders:
        raise ValueError(f"unknown profile type {kind!r}")
    return builders[kind](**params)


# Killing flows


@dataclass(frozen=True)
class KillingFlowChart:
    tag: ChartTag = "minkowski_boost"
    mass: float = 1.0

    @property
    def is_kruskal(self) -> bool:
        return self.tag == "kruskal_time"

    @property
    def point_dim(self) -> int:
        return 5 if self.is_kruskal else 4

    def flow(self, s: float, points: np.ndarray) -> np.ndarray:
        """Λ_s applied to an array of points"""
        points = np.asarray(points, dtype=float)
        out = points.copy()
        if self.tag == "minkowski_translation":
            out[..., 0] = points[..., 0] + s
            return out
        rapidity = s / (4.0 * self.mass) if self.is_kruskal else s
        ch, sh = math.cosh(rapidity), math.sinh(rapidity)
        out[..., 0] = ch * points[..., 0] + sh * points[..., 1]
        out[..., 1] = sh * points[..., 0] + ch * points[..., 1]
        if self.is_kruskal and np.any(out[..., 1] ** 2 - out[..., 0] ** 2 <= -1.0):
            raise LeavesChart("Kruskal flow left x² − t² > −1")
        return out

    def in_chart(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if self.is_kruskal:
            return points[..., 1] ** 2 - points[..., 0] ** 2 > -1.0
        return np.ones(points.shape[:-1], dtype=bool)


MINKOWSKI_BOOST = KillingFlowChart("minkowski_boost")
MINKOWSKI_TRANSLATION = KillingFlowChart("minkowski_translation")


def boost_flow(s: float, p: MinkowskiPoint) -> MinkowskiPoint:
    return MinkowskiPoint.from_array(MINKOWSKI_BOOST.flow(s, p.as_array()))


def minkowski_translation(s: float, p: MinkowskiPoint) -> MinkowskiPoint:
    return MinkowskiPoint.from_array(MINKOWSKI_TRANSLATION.flow(s, p.as_array()))


def kruskal_flow(s: float, mass: float, p: KruskalPoint) -> KruskalPoint:
    return KruskalPoint.from_array(KillingFlowChart("kruskal_time", mass).flow(s, p.as_array()), mass)


def schwarzschild_radius(t: float, x: float, mass: float = 1.0) -> float:
    """r > 0 with x² − t² = e^{r/2M}(r/2M − 1)"""
    c = x * x - t * t
    if c <= -1.0:
        raise OutsideChart(f"x² − t² = {c} ≤ −1")
    upper = 2.0 + math.log1p(max(c, 0.0))
    rho = brentq(lambda r: math.exp(r) * (r - 1.0) - c, 0.0, upper, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return 2.0 * mass * rho


# Membership predicates (open regions, strict inequalities)


def _deformed_mask(points: np.ndarray, f: Profile, lam: float = 0.0) -> np.ndarray:
    v, w, y = null_coordinates(points)
    return (w > 0.0) & (v > 2.0 * (f(y) + lam))


def wedge_membership(p: Point) -> Union[bool, np.ndarray]:
    """x1 > |x0| (resp. x > |t|)"""
    mask = _deformed_mask(_as_points(p), ConstantProfile(0.0))
    return bool(mask) if mask.ndim == 0 else mask


def deformed_wedge_membership(f: Profile, p: Point) -> Union[bool, np.ndarray]:
    """|x0 − f(y)| < x1 − f(y)"""
    pts = _as_points(p)
    _, _, y = null_coordinates(pts)
    fy = f(y)
    mask = np.abs(pts[..., 0] - fy) < pts[..., 1] - fy
    return bool(mask) if mask.ndim == 0 else mask


def strip_surface_membership(f: Profile, lam: float, p: Point, band: Optional[float] = None) -> bool:
    """p ∈ A_{f+λ}: x0 = −x1 + 2(f(y)+λ) within the band and x1 > f(y) + λ"""
    band = get_settings().surface_band if band is None else band
    v, w, y = null_coordinates(_as_points(p))
    a = float(f(y) + lam)
    return bool(abs(float(v) - 2.0 * a) <= band * max(1.0, abs(float(v))) and float(w) > 0.0)


def strip_orbit_parameter(
    f: Profile, lam: float, p: Point, chart: KillingFlowChart = MINKOWSKI_BOOST, s_max: float = 64.0
) -> float:
    """
    The s > 0 with Λ_{−s}p ∈ A_{f+λ}.

    Raises:
        RootNotBracketed: no such s (p is not in the strip)
        AmbiguousRoot: the surface defect is not monotone along the orbit
    """
    pts = _as_points(p)
    _, _, y = null_coordinates(pts)
    a = float(f(y) + lam)

    def defect(s: float) -> float:
        v, _, _ = null_coordinates(chart.flow(-s, pts))
        return float(v) - 2.0 * a

    start = defect(0.0)
    v0, _, _ = null_coordinates(pts)
    if start <= get_settings().surface_band * max(1.0, abs(float(v0))):
        raise RootNotBracketed("p lies on or below the surface", {"defect": start})
    hi = 1.0
    while defect(hi) > 0.0 and hi < s_max:
        hi *= 2.0
    if defect(hi) > 0.0:
        raise RootNotBracketed(f"orbit does not reach the surface for s ≤ {hi}", {"s_max": hi})
    grid = np.linspace(0.0, hi, 33)
    values = np.array([defect(s) for s in grid])
    if np.any(np.diff(values) > 0.0):
        raise AmbiguousRoot("surface defect is not monotone along the orbit", {"bracket": [0.0, hi]})
    s = brentq(defect, 0.0, hi, xtol=1e-14)
    _, w, _ = null_coordinates(chart.flow(-s, pts))
    if float(w) <= 0.0:
        raise RootNotBracketed("orbit meets the surface equation outside A", {"s": s, "w": float(w)})
    return float(s)


def strip_membership(f: Profile, lam: float, p: Point, chart: KillingFlowChart = MINKOWSKI_BOOST) -> bool:
    """p ∈ O⁺_{A_{f+λ}}: Λ_{−s}p ∈ A_{f+λ} for some s > 0"""
    try:
        return strip_orbit_parameter(f, lam, p, chart) > 0.0
    except RootNotBracketed:
        return False


class CausalRelation(str, Enum):
    TIMELIKE_FUTURE = "timelike_future"
    TIMELIKE_PAST = "timelike_past"
    NULL_FUTURE = "null_future"
    NULL_PAST = "null_past"
    SPACELIKE = "spacelike"
    COINCIDENT = "coincident"

    def reverse(self) -> "CausalRelation":
        swap = {
            CausalRelation.TIMELIKE_FUTURE: CausalRelation.TIMELIKE_PAST,
            CausalRelation.TIMELIKE_PAST: CausalRelation.TIMELIKE_FUTURE,
            CausalRelation.NULL_FUTURE: CausalRelation.NULL_PAST,
            CausalRelation.NULL_PAST: CausalRelation.NULL_FUTURE,
        }
        return swap.get(self, self)


def causal_relation(p: Point, q: Point, chart: KillingFlowChart = MINKOWSKI_BOOST, tol: float = 1e-12) -> CausalRelation:
    """
    Relation of q to p.

    Equal points are COINCIDENT. Distinct points with dt = 0 are SPACELIKE,
    including on a fixed Kruskal sphere.
    """
    a, b = _as_points(p), _as_points(q)
    dt = float(b[0] - a[0])
    if chart.is_kruskal:
        if np.linalg.norm(a[2:] - b[2:]) > 1e-12:
            raise DifferentSpheres("Kruskal causal relations are decided on a fixed Ω only")
        interval = -dt * dt + float(b[1] - a[1]) ** 2
    else:
        interval = -dt * dt + float(np.sum((b[1:] - a[1:]) ** 2))
    size = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    if float(np.max(np.abs(b - a))) <= tol * size:
        return CausalRelation.COINCIDENT
    scale = max(1.0, float(np.sum((b - a) ** 2)))
    if interval > tol * scale or dt == 0.0:
        return CausalRelation.SPACELIKE
    if interval < -tol * scale:
        return CausalRelation.TIMELIKE_FUTURE if dt > 0 else CausalRelation.TIMELIKE_PAST
    return CausalRelation.NULL_FUTURE if dt > 0 else CausalRelation.NULL_PAST


def _chronological(a: np.ndarray, b: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """
    b ∈ I⁺(a), vectorised over Minkowski points.

    Decided in lightcone coordinates with a relative band, so pairs on a
    common null generator stay null under rounding.
    """
    tol = get_settings().surface_band if tol is None else tol
    va, wa = a[..., 0] + a[..., 1], a[..., 1] - a[..., 0]
    vb, wb = b[..., 0] + b[..., 1], b[..., 1] - b[..., 0]
    dv, dw = vb - va, wb - wa
    dy2 = np.sum((b[..., 2:] - a[..., 2:]) ** 2, axis=-1)
    scale = np.maximum(1.0, np.maximum(np.maximum(np.abs(va), np.abs(vb)), np.maximum(np.abs(wa), np.abs(wb))))
    band = tol * scale
    return (dv > band) & (dw < -band) & (-dv * dw - dy2 > band * scale)


# Regions and sampling


@dataclass(frozen=True)
class RegionPredicate:
    """Open region with a vectorised membership test and a sampling box"""

    tag: str
    contains: Callable[[np.ndarray], np.ndarray]
    box: Tuple[Tuple[float, float], ...]
    chart: KillingFlowChart = MINKOWSKI_BOOST
    omega: Optional[Tuple[float, float, float]] = None

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return self.contains(points) & self.chart.in_chart(points)

    def candidates(self, rng: np.random.Generator, count: int) -> np.ndarray:
        lo = np.array([b[0] for b in self.box])
        hi = np.array([b[1] for b in self.box])
        coords = lo + (hi - lo) * rng.random((count, lo.size))
        if not self.chart.is_kruskal:
            return coords
        if self.omega is not None:
            omega = np.tile(np.asarray(self.omega, dtype=float), (count, 1))
        else:
            omega = rng.normal(size=(count, 3))
            omega /= np.linalg.norm(omega, axis=1, keepdims=True)
        return np.hstack([coords[:, :2], omega])


def _default_box(chart: KillingFlowChart, box: Optional[Sequence[Sequence[float]]]) -> Tuple[Tuple[float, float], ...]:
    if box is not None:
        return tuple((float(lo), float(hi)) for lo, hi in box)
    if chart.is_kruskal:
        return ((-5.0, 5.0), (-5.0, 5.0))
    return ((-5.0, 5.0), (-5.0, 5.0), (-3.0, 3.0), (-3.0, 3.0))


def wedge_region(chart: KillingFlowChart = MINKOWSKI_BOOST, box=None, omega=None) -> RegionPredicate:
    return deformed_wedge_region(ConstantProfile(0.0), 0.0, chart, box, omega, tag="wedge")


def deformed_wedge_region(
    f: Profile, lam: float = 0.0, chart: KillingFlowChart = MINKOWSKI_BOOST, box=None, omega=None, tag: str = "deformed_wedge"
) -> RegionPredicate:
    """W_{f+λ} = {w > 0, v > 2(f(y) + λ)}"""
    return RegionPredicate(tag, lambda pts: _deformed_mask(pts, f, lam), _default_box(chart, box), chart, omega)


def translated_wedge_region(
    shift: Tuple[float, float], chart: KillingFlowChart = MINKOWSKI_BOOST, box=None, omega=None
) -> RegionPredicate:
    """W₀ + τ with τ = (τ₀, τ₁) in the (time, radial) plane"""
    tau_v, tau_w = shift[0] + shift[1], shift[1] - shift[0]

    def contains(pts: np.ndarray) -> np.ndarray:
        v, w, _ = null_coordinates(pts)
        return (w > tau_w) & (v > tau_v)

    return RegionPredicate("translated", contains, _default_box(chart, box), chart, omega)


def strip_region(f: Profile, lam: float, chart: KillingFlowChart = MINKOWSKI_BOOST, box=None, omega=None) -> RegionPredicate:
    """Positive half-orbit of A_{f+λ}, decided point by point along the orbit"""

    def contains(pts: np.ndarray) -> np.ndarray:
        flat = pts.reshape(-1, pts.shape[-1])
        out = np.zeros(flat.shape[0], dtype=bool)
        # orbits of out-of-chart points are undefined
        for i in np.flatnonzero(chart.in_chart(flat)):
            out[i] = strip_membership(f, lam, flat[i], chart)
        return out.reshape(pts.shape[:-1])

    return RegionPredicate("strip", contains, _default_box(chart, box), chart, omega)


def forward_light_cone_region(box=None) -> RegionPredicate:
    """V₊ = {x0 > |x⃗|}"""

    def contains(pts: np.ndarray) -> np.ndarray:
        return pts[..., 0] > np.linalg.norm(pts[..., 1:], axis=-1)

    return RegionPredicate("forward_light_cone", contains, _default_box(MINKOWSKI_TRANSLATION, box), MINKOWSKI_TRANSLATION)


def _chunk_map(fn: Callable[[int], Any], chunks: Sequence[int], workers: int) -> List[Any]:
    if workers <= 1:
        return [fn(k) for k in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


def sample_region(
    region: RegionPredicate,
    n_samples: int,
    seed: int,
    chunk: Optional[int] = None,
    workers: Optional[int] = None,
    max_chunks: int = 4096,
    stream: int = 0,
) -> np.ndarray:
    """
    Rejection sampling; chunk k draws from make_rng(seed, stream, k), so the
    accepted sequence does not depend on the worker count.
    """
    settings = get_settings()
    chunk = settings.sample_chunk if chunk is None else chunk
    workers = settings.workers if workers is None else workers

    def draw(k: int) -> np.ndarray:
        cand = region.candidates(make_rng(seed, stream, k), chunk)
        return cand[region(cand)]

    accepted: List[np.ndarray] = []
    total = 0
    k = 0
    while total < n_samples and k < max_chunks:
        batch = list(range(k, min(k + max(workers, 1), max_chunks)))
        for part in _chunk_map(draw, batch, workers):
            accepted.append(part)
            total += part.shape[0]
        k = batch[-1] + 1
    if total == 0:
        raise EmptySample(f"no samples accepted in region {region.tag}", {"chunks": k})
    if total < n_samples:
        logger.warning(f"Region {region.tag}: only {total} of {n_samples} samples accepted")
    return np.vstack(accepted)[:n_samples]


# Sweeps


@dataclass
class SweepReport:
    name: str
    samples: int
    checked: int
    violations: int
    seed: int
    examples: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "samples": self.samples,
            "checked": self.checked,
            "violations": self.violations,
            "seed": self.seed,
            "examples": self.examples,
        }


_MAX_EXAMPLES = 10


def half_invariance_check(
    region: RegionPredicate,
    n_samples: Optional[int] = None,
    s_grid: Sequence[float] = (0.1, 1.0, 5.0),
    seed: Optional[int] = None,
    flow: Optional[KillingFlowChart] = None,
    workers: Optional[int] = None,
) -> SweepReport:
    """Λ_s(V) ⊂ V for every s in the grid, sampled"""
    settings = get_settings()
    n_samples = settings.samples if n_samples is None else n_samples
    seed = settings.seed if seed is None else seed
    flow = flow or region.chart
    points = sample_region(region, n_samples, seed, workers=workers)
    violations = 0
    examples: List[Dict[str, Any]] = []
    for s in s_grid:
        moved = flow.flow(s, points)
        bad = np.flatnonzero(~region(moved))
        violations += bad.size
        for i in bad[: _MAX_EXAMPLES - len(examples)]:
            examples.append({"point": points[i].tolist(), "s": float(s)})
    logger.info(
        f"Half-invariance sweep on {region.tag}: {violations} violations",
        extra={"samples": points.shape[0], "s_grid": list(s_grid)},
    )
    return SweepReport(f"half_invariance:{region.tag}", points.shape[0], points.shape[0] * len(s_grid), violations, seed, examples)


def _causal_steps(
    rng: np.random.Generator, count: int, dim: int, direction: str, max_step: float, spread: float
) -> np.ndarray:
    """Future-directed near-null vectors (k₀ slightly above |k⃗|)"""
    if direction == "transverse":
        angle = rng.uniform(0.0, 2.0 * math.pi, size=count)
        spatial = np.column_stack(
            [rng.uniform(-0.1, 0.1, size=count), np.cos(angle), np.sin(angle)]
        )
    else:
        spatial = rng.normal(size=(count, dim - 1))
    spatial /= np.linalg.norm(spatial, axis=1, keepdims=True)
    length = rng.uniform(0.0, max_step, size=(count, 1))
    spatial *= length
    k0 = np.linalg.norm(spatial, axis=1) * (1.0 + rng.uniform(0.0, spread, size=count))
    return np.column_stack([k0, spatial])


def causal_convexity_check(
    region: RegionPredicate,
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
    direction: Literal["null", "transverse"] = "null",
    max_step: float = 2.0,
    spread: float = 0.01,
    workers: Optional[int] = None,
) -> SweepReport:
    """a, b ∈ V and a ≤ q ≤ b causally ⇒ q ∈ V, on sampled triples"""
    settings = get_settings()
    n_samples = settings.samples if n_samples is None else n_samples
    seed = settings.seed if seed is None else seed
    if region.chart.is_kruskal:
        raise ValueError("causal convexity sampling is implemented on the Minkowski chart")
    a = sample_region(region, n_samples, seed, workers=workers)
    rng = make_rng(seed, 1)
    q = a + _causal_steps(rng, a.shape[0], a.shape[1], direction, max_step, spread)
    b = q + _causal_steps(rng, a.shape[0], a.shape[1], direction, max_step, spread)
    valid = region(b)
    bad = np.flatnonzero(valid & ~region(q))
    examples = [
        {"a": a[i].tolist(), "q": q[i].tolist(), "b": b[i].tolist()} for i in bad[:_MAX_EXAMPLES]
    ]
    logger.info(
        f"Causal convexity sweep on {region.tag}: {bad.size} violations",
        extra={"triples": int(valid.sum()), "direction": direction},
    )
    return SweepReport(f"causal_convexity:{region.tag}", a.shape[0], int(valid.sum()), int(bad.size), seed, examples)


def _hull_brackets(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """s₁ < s₂ that work for every x ∈ W₀ against the orbit of (0, 1, 0, 0)"""
    v, w, y = null_coordinates(points)
    y2 = np.sum(y ** 2, axis=-1)
    s1 = np.minimum(np.log(v / 2.0), -np.log(w + 2.0 * y2 / v + 1.0)) - 1.0
    s2 = np.maximum(np.log(2.0 / w), np.log(v + 2.0 * y2 / w + 1.0)) + 1.0
    return s1, s2


def _in_orbit_hull(points: np.ndarray, p: np.ndarray, s_grid: np.ndarray) -> np.ndarray:
    """∃ s₁ < s₂ on the grid with x ∈ I⁺(Λ_{s₁}p) ∩ I⁻(Λ_{s₂}p)"""
    orbit = np.stack([MINKOWSKI_BOOST.flow(s, p) for s in s_grid])
    fut = _chronological(orbit[None, :, :], points[:, None, :])
    past = _chronological(points[:, None, :], orbit[None, :, :])
    first_fut = np.where(fut.any(axis=1), fut.argmax(axis=1), s_grid.size)
    last_past = np.where(past.any(axis=1), s_grid.size - 1 - past[:, ::-1].argmax(axis=1), -1)
    return first_fut < last_past


def wedge_hull_check(
    p: Point = (0.0, 1.0, 0.0, 0.0),
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
    box=None,
    workers: Optional[int] = None,
) -> SweepReport:
    """W₀ = I⁻(O_p) ∩ I⁺(O_p): interior samples must lie in the orbit hull, exterior ones must not"""
    settings = get_settings()
    n_samples = settings.samples if n_samples is None else n_samples
    seed = settings.seed if seed is None else seed
    p = _as_points(p)
    if not wedge_membership(p):
        raise ValueError("orbit base point must lie in W₀")
    box = _default_box(MINKOWSKI_BOOST, box)
    interior = sample_region(wedge_region(box=box), n_samples, seed, workers=workers)
    s_grid = np.linspace(-20.0, 20.0, 801)
    ok = np.zeros(interior.shape[0], dtype=bool)
    if np.allclose(p, [0.0, 1.0, 0.0, 0.0]):
        s1, s2 = _hull_brackets(interior)
        lo = np.zeros_like(interior)
        lo[:, 0], lo[:, 1] = np.sinh(s1), np.cosh(s1)
        hi = np.zeros_like(interior)
        hi[:, 0], hi[:, 1] = np.sinh(s2), np.cosh(s2)
        ok = _chronological(lo, interior) & _chronological(interior, hi) & (s1 < s2)
    pending = np.flatnonzero(~ok)
    if pending.size:
        ok[pending] = _in_orbit_hull(interior[pending], p, s_grid)
    exterior_region = RegionPredicate(
        "wedge_exterior", lambda pts: ~_deformed_mask(pts, ConstantProfile(0.0)), box
    )
    exterior = sample_region(exterior_region, max(n_samples // 10, 1), seed, workers=workers, stream=1)
    leaked = _in_orbit_hull(exterior, p, s_grid)
    bad_in = np.flatnonzero(~ok)
    bad_out = np.flatnonzero(leaked)
    examples = [{"interior": interior[i].tolist()} for i in bad_in[:_MAX_EXAMPLES]]
    examples += [{"exterior": exterior[i].tolist()} for i in bad_out[: _MAX_EXAMPLES - len(examples)]]
    return SweepReport(
        "wedge_hull",
        interior.shape[0] + exterior.shape[0],
        interior.shape[0] + exterior.shape[0],
        int(bad_in.size + bad_out.size),
        seed,
        examples,
    )


def strip_equivalence_check(
    f: Profile,
    lam: float,
    n_samples: int = 10_000,
    seed: Optional[int] = None,
    chart: KillingFlowChart = MINKOWSKI_BOOST,
    box=None,
    omega=None,
    workers: Optional[int] = None,
) -> SweepReport:
    """strip_membership against deformed_wedge_membership(f, p − (λ, λ)) on box samples"""
    seed = get_settings().seed if seed is None else seed
    everything = RegionPredicate("box", lambda pts: np.ones(pts.shape[:-1], dtype=bool), _default_box(chart, box), chart, omega)
    points = sample_region(everything, n_samples, seed, workers=workers)
    shift = np.zeros(points.shape[1])
    shift[:2] = lam
    by_wedge = np.asarray(deformed_wedge_membership(f, points - shift), dtype=bool)
    by_orbit = np.array([strip_membership(f, lam, p, chart) for p in points], dtype=bool)
    bad = np.flatnonzero(by_wedge != by_orbit)
    examples = [
        {"point": points[i].tolist(), "wedge": bool(by_wedge[i]), "strip": bool(by_orbit[i])} for i in bad[:_MAX_EXAMPLES]
    ]
    return SweepReport("strip_equivalence", points.shape[0], points.shape[0], int(bad.size), seed, examples)


def achronality_check(
    f: Profile,
    lam: float,
    n_pairs: int = 10_000,
    seed: Optional[int] = None,
    same_transverse: bool = True,
    box: Tuple[Tuple[float, float], ...] = ((-3.0, 3.0), (-3.0, 3.0)),
    w_max: float = 10.0,
) -> SweepReport:
    """Sampled pairs on A_{f+λ} must not be timelike related"""
    seed = get_settings().seed if seed is None else seed
    rng = make_rng(seed, 2)
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])

    def surface_points(y: np.ndarray) -> np.ndarray:
        v = 2.0 * (f(y) + lam)
        w = rng.uniform(0.0, w_max, size=y.shape[0])
        return np.column_stack([0.5 * (v - w), 0.5 * (v + w), y])

    y1 = lo + (hi - lo) * rng.random((n_pairs, lo.size))
    y2 = y1 if same_transverse else lo + (hi - lo) * rng.random((n_pairs, lo.size))
    p, q = surface_points(y1), surface_points(y2)
    timelike = _chronological(p, q) | _chronological(q, p)
    bad = np.flatnonzero(timelike)
    examples = [{"p": p[i].tolist(), "q": q[i].tolist()} for i in bad[:_MAX_EXAMPLES]]
    name = "achronality:same_y" if same_transverse else "achronality:cross_y"
    return SweepReport(name, n_pairs, n_pairs, int(bad.size), seed, examples)

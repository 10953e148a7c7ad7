"""
Schrödinger model of a half-sided modular inclusion on the light ray
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import CubicHermiteSpline, PPoly

from config import get_settings
from .errors import GridTooCoarse, KinkPoint, NumericallySingular
from .linalg_utils import orthonormal_columns
from .standard_subspace import ComplexSpace, RealSubspace, entropy

logger = logging.getLogger(__name__)

_KNOT_TOL = 1e-12
_TAYLOR_TERMS = 32


def _to_ppoly(knots: np.ndarray, polys: Sequence[Polynomial]) -> PPoly:
    """PPoly from per-interval polynomials in the local variable u = x − knots[i]"""
    degree = max(len(p.coef) for p in polys) - 1
    coeffs = np.zeros((degree + 1, len(polys)))
    for j, poly in enumerate(polys):
        asc = np.zeros(degree + 1)
        asc[: len(poly.coef)] = poly.coef
        coeffs[:, j] = asc[::-1]
    return PPoly(coeffs, knots, extrapolate=False)


def _integral(pp: PPoly, lower: float = -np.inf, upper: float = np.inf) -> float:
    lo = max(lower, pp.x[0])
    hi = min(upper, pp.x[-1])
    if hi <= lo:
        return 0.0
    return float(pp.integrate(lo, hi))


@dataclass(frozen=True)
class WavePacket:
    """Compactly supported real piecewise cubic, zero outside [knots[0], knots[-1]]"""

    knots: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=float)
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.shape[0] < 4:
            coeffs = np.vstack([np.zeros((4 - coeffs.shape[0], coeffs.shape[1])), coeffs])
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "coeffs", coeffs)
        if knots.ndim != 1 or knots.size < 2 or np.any(np.diff(knots) <= 0):
            raise ValueError("knots must be strictly increasing with at least two entries")
        if coeffs.shape != (4, knots.size - 1):
            raise ValueError(f"coefficients of shape {coeffs.shape} for {knots.size - 1} pieces")
        scale = max(1.0, float(np.max(np.abs(coeffs))))
        pieces = self.pieces
        widths = np.diff(knots)
        if abs(pieces[0](0.0)) > 1e-9 * scale or abs(pieces[-1](widths[-1])) > 1e-9 * scale:
            raise ValueError("packet must vanish at both ends of its support")
        for j in range(len(pieces) - 1):
            if abs(pieces[j](widths[j]) - pieces[j + 1](0.0)) > 1e-9 * scale:
                raise ValueError(f"packet is discontinuous at knot {knots[j + 1]}")

    # Constructors

    @classmethod
    def from_pieces(cls, knots: Sequence[float], polys: Sequence[Polynomial]) -> "WavePacket":
        pp = _to_ppoly(np.asarray(knots, dtype=float), polys)
        return cls(pp.x, pp.c)

    @classmethod
    def from_hermite(
        cls, knots: Sequence[float], values: Sequence[float], derivs: Sequence[float]
    ) -> "WavePacket":
        spline = CubicHermiteSpline(np.asarray(knots, float), np.asarray(values, float), np.asarray(derivs, float))
        return cls(spline.x, spline.c)

    @classmethod
    def piecewise_linear(cls, knots: Sequence[float], values: Sequence[float]) -> "WavePacket":
        knots = np.asarray(knots, dtype=float)
        values = np.asarray(values, dtype=float)
        slopes = np.diff(values) / np.diff(knots)
        polys = [Polynomial([values[j], slopes[j]]) for j in range(slopes.size)]
        return cls.from_pieces(knots, polys)

    @classmethod
    def tent(cls, start: float = 0.0, peak: float = 1.0, end: float = 2.0, height: float = 1.0) -> "WavePacket":
        return cls.piecewise_linear([start, peak, end], [0.0, height, 0.0])

    @classmethod
    def bump(cls, center: float = 0.0, radius: float = 1.0, height: float = 1.0) -> "WavePacket":
        """C¹ cubic bump with vanishing end derivatives"""
        return cls.from_hermite([center - radius, center, center + radius], [0.0, height, 0.0], [0.0, 0.0, 0.0])

    # Accessors

    @cached_property
    def pieces(self) -> List[Polynomial]:
        return [Polynomial(self.coeffs[::-1, j]) for j in range(self.coeffs.shape[1])]

    @cached_property
    def derivative_pieces(self) -> List[Polynomial]:
        return [p.deriv() for p in self.pieces]

    @property
    def support(self) -> Tuple[float, float]:
        return float(self.knots[0]), float(self.knots[-1])

    @property
    def width(self) -> float:
        return float(self.knots[-1] - self.knots[0])

    def _locate(self, x: float) -> int:
        return int(np.clip(np.searchsorted(self.knots, x, side="right") - 1, 0, self.knots.size - 2))

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = PPoly(self.coeffs, self.knots, extrapolate=False)(x)
        return np.nan_to_num(out, nan=0.0)

    def derivative(self, x: float, side: str = "right") -> float:
        """One-sided φ′(x); zero outside the support"""
        a, b = self.support
        if side == "right":
            if x < a or x >= b:
                return 0.0
            j = self._locate(x)
        else:
            if x <= a or x > b:
                return 0.0
            j = int(np.searchsorted(self.knots, x, side="left") - 1)
        return float(self.derivative_pieces[j](x - self.knots[j]))

    @cached_property
    def kinks(self) -> np.ndarray:
        """Knots where φ′ jumps (the support ends count)"""
        out = []
        scale = max(1.0, float(np.max(np.abs(self.coeffs))))
        for x in self.knots:
            if abs(self.derivative(x, "left") - self.derivative(x, "right")) > 1e-12 * scale:
                out.append(x)
        return np.asarray(out)

    def is_kink(self, x: float) -> bool:
        return bool(self.kinks.size) and bool(np.min(np.abs(self.kinks - x)) <= _KNOT_TOL * max(1.0, abs(x)))

    def derivative_variation(self) -> float:
        """Total variation of φ′ including jumps"""
        jumps = sum(abs(self.derivative(x, "left") - self.derivative(x, "right")) for x in self.knots)
        smooth = 0.0
        for h, dd in zip(np.diff(self.knots), (p.deriv(2) for p in self.pieces)):
            roots = [r.real for r in dd.roots() if abs(r.imag) < 1e-14 and 0.0 < r.real < h]
            cuts = [0.0, *sorted(roots), h]
            anti = dd.integ()
            smooth += sum(abs(anti(cuts[k + 1]) - anti(cuts[k])) for k in range(len(cuts) - 1))
        return float(jumps + smooth)

    def to_descriptor(self) -> Dict[str, list]:
        return {"knots": self.knots.tolist(), "coeffs": self.coeffs.tolist()}


def _refine(packet: WavePacket, knots: np.ndarray, derivative: bool = False) -> List[Polynomial]:
    """Re-express φ (or φ′) on a finer knot vector covering its support"""
    source = packet.derivative_pieces if derivative else packet.pieces
    a, b = packet.support
    out = []
    for left, right in zip(knots[:-1], knots[1:]):
        mid = 0.5 * (left + right)
        if mid <= a or mid >= b:
            out.append(Polynomial([0.0]))
            continue
        j = packet._locate(mid)
        out.append(source[j](Polynomial([left - packet.knots[j], 1.0])))
    return out


def _merged_knots(*packets: WavePacket) -> np.ndarray:
    return np.unique(np.concatenate([p.knots for p in packets]))


def random_packet(rng: np.random.Generator, kind: str = "smooth", pieces: int = 4, span: float = 3.0) -> WavePacket:
    """Random packet on [0, span]: C¹ Hermite ('smooth') or piecewise linear ('kinked')"""
    interior = np.sort(rng.uniform(0.0, span, size=pieces - 1))
    knots = np.concatenate([[0.0], interior, [span]])
    while np.any(np.diff(knots) < 0.05 * span):
        interior = np.sort(rng.uniform(0.0, span, size=pieces - 1))
        knots = np.concatenate([[0.0], interior, [span]])
    values = np.concatenate([[0.0], rng.normal(size=pieces - 1), [0.0]])
    if kind == "kinked":
        return WavePacket.piecewise_linear(knots, values)
    derivs = np.concatenate([[0.0], rng.normal(size=pieces - 1), [0.0]])
    return WavePacket.from_hermite(knots, values, derivs)


# Entropy and its derivatives (exact per piece)


def entropy_at(phi: WavePacket, lam: float) -> float:
    """π ∫_λ^∞ (x − λ) φ′(x)² dx"""
    polys = [
        Polynomial([x0 - lam, 1.0]) * d * d for x0, d in zip(phi.knots[:-1], phi.derivative_pieces)
    ]
    return math.pi * _integral(_to_ppoly(phi.knots, polys), lower=lam)


def entropy_derivative_at(phi: WavePacket, lam: float) -> float:
    """−π ∫_λ^∞ φ′(x)² dx"""
    polys = [d * d for d in phi.derivative_pieces]
    return -math.pi * _integral(_to_ppoly(phi.knots, polys), lower=lam)


def entropy_second_derivative_at(phi: WavePacket, lam: float) -> float:
    """π φ′(λ)²; raises KinkPoint with both one-sided values at kinks"""
    if phi.is_kink(lam):
        raise KinkPoint(lam, math.pi * phi.derivative(lam, "left") ** 2, math.pi * phi.derivative(lam, "right") ** 2)
    return math.pi * phi.derivative(lam) ** 2


def symplectic_form(phi: WavePacket, psi: WavePacket) -> float:
    """Im⟨φ, ψ⟩ = ½ ∫ φ′ψ dx"""
    knots = _merged_knots(phi, psi)
    polys = [d * v for d, v in zip(_refine(phi, knots, True), _refine(psi, knots))]
    return 0.5 * _integral(_to_ppoly(knots, polys))


def entropy_form(phi: WavePacket, psi: WavePacket, lam: float) -> float:
    """π ∫_λ^∞ (x − λ) φ′ψ′ dx; the diagonal is entropy_at"""
    knots = _merged_knots(phi, psi)
    polys = [
        Polynomial([x0 - lam, 1.0]) * d * e
        for x0, d, e in zip(knots[:-1], _refine(phi, knots, True), _refine(psi, knots, True))
    ]
    return math.pi * _integral(_to_ppoly(knots, polys), lower=lam)


def modular_generator_form(phi: WavePacket, psi: WavePacket, lam: float) -> float:
    """
    Im⟨ψ, P_{H_λ} (i logΔ_{H_λ}) φ⟩ for the inclusion translated to λ.

    On the light ray logΔ_{H_λ} acts as −2π(x − λ)∂ₓ on the half line
    x ≥ λ, so after one integration by parts the form is
    π ∫_λ^∞ (x − λ) φ′ψ′ dx. It is symmetric and its diagonal is
    entropy_at. Packets supported left of λ pair to zero.
    """
    if phi.support[1] <= lam or psi.support[1] <= lam:
        logger.debug(f"generator form at λ={lam} sees a packet supported left of λ")
        return 0.0
    return entropy_form(phi, psi, lam)


# U, V, J


def translate(phi: WavePacket, s: float) -> WavePacket:
    """(U(s)φ)(x) = φ(x − s)"""
    return WavePacket(phi.knots + s, phi.coeffs.copy())


def dilate(phi: WavePacket, t: float, unitary: bool = True) -> WavePacket:
    """(V(t)φ)(x) = φ(eᵗx); `unitary=False` adds the literal e^{-t} prefactor"""
    powers = np.arange(3, -1, -1)[:, None]
    coeffs = phi.coeffs * np.exp(t * powers)
    if not unitary:
        coeffs = coeffs * np.exp(-t)
    return WavePacket(phi.knots * np.exp(-t), coeffs)


def reflect(phi: WavePacket) -> WavePacket:
    """(Jφ)(x) = φ(−x)"""
    widths = np.diff(phi.knots)
    polys = [p(Polynomial([h, -1.0])) for p, h in zip(phi.pieces[::-1], widths[::-1])]
    return WavePacket.from_pieces(-phi.knots[::-1], polys)


def modular_flow(phi: WavePacket, s: float) -> WavePacket:
    """Δ^{is}φ = V(2πs)φ"""
    return dilate(phi, 2.0 * math.pi * s)


def packet_distance(a: WavePacket, b: WavePacket, samples_per_piece: int = 17) -> float:
    """Sup-norm distance sampled on the merged knot vector"""
    knots = _merged_knots(a, b)
    xs = np.concatenate(
        [np.linspace(l, r, samples_per_piece) for l, r in zip(knots[:-1], knots[1:])]
    )
    return float(np.max(np.abs(a(xs) - b(xs))))


# Spectral side


@dataclass(frozen=True)
class SpectralGrid:
    """Geometric Gauss–Legendre panels on [p_min, p_switch], uniform panels up to p_max"""

    p_min: float
    p_switch: float
    p_max: float
    geometric_panels: int
    uniform_panels: int
    order: int = 8

    @classmethod
    def for_packets(cls, *packets: WavePacket) -> "SpectralGrid":
        settings = get_settings()
        width = min(p.width for p in packets)
        extent = float(max(p.knots[-1] for p in packets) - min(p.knots[0] for p in packets))
        tv = max(p.derivative_variation() for p in packets)
        # high-momentum tail tv²/(4π p_max²) must stay under the tail tolerance
        p_max = max(
            settings.spectral_bandwidth_factor / width,
            2.0 * tv / math.sqrt(4.0 * math.pi * settings.spectral_tail_tol),
        )
        p_switch = min(1.0 / width, 0.5 * p_max)
        panels = max(settings.spectral_nodes // settings.spectral_order, 16)
        geometric = max(panels // 8, 8)
        # uniform panels must keep the phase step p·extent below π/2
        needed = int(math.ceil((p_max - p_switch) * max(extent, width) / (0.5 * math.pi)))
        uniform = max(panels - geometric, needed)
        return cls(settings.spectral_p_min, p_switch, p_max, geometric, uniform, settings.spectral_order)

    @cached_property
    def nodes(self) -> Tuple[np.ndarray, np.ndarray]:
        x, w = leggauss(self.order)
        edges = np.concatenate(
            [
                np.geomspace(self.p_min, self.p_switch, self.geometric_panels + 1),
                np.linspace(self.p_switch, self.p_max, self.uniform_panels + 1)[1:],
            ]
        )
        left, right = edges[:-1, None], edges[1:, None]
        half = 0.5 * (right - left)
        p = (left + half * (x[None, :] + 1.0)).ravel()
        weights = (half * w[None, :]).ravel()
        return p, weights

    @property
    def uniform_step(self) -> float:
        return (self.p_max - self.p_switch) / self.uniform_panels

    def check(self, *packets: WavePacket) -> float:
        """Resolution check; returns the combined tail bound"""
        extent = float(max(p.knots[-1] for p in packets) - min(p.knots[0] for p in packets))
        if self.uniform_step * extent > math.pi:
            raise GridTooCoarse(
                "uniform panels do not resolve the oscillation e^{ipx}",
                {"step": self.uniform_step, "extent": extent},
            )
        tail = max(spectral_tail_bound(p, self) for p in packets)
        tol = get_settings().spectral_tail_tol
        if tail > tol:
            raise GridTooCoarse(f"spectral tail bound {tail:.3e} exceeds {tol:.1e}", {"tail": tail})
        return tail


def spectral_tail_bound(phi: WavePacket, grid: SpectralGrid) -> float:
    """Mass of ∫ p|φ̂|² outside [p_min, p_max]"""
    tv = phi.derivative_variation()
    xs = np.linspace(phi.knots[0], phi.knots[-1], 257)
    l1 = phi.width * float(np.max(np.abs(phi(xs))))
    high = tv ** 2 / (4.0 * math.pi * grid.p_max ** 2)
    low = l1 ** 2 * grid.p_min ** 2 / (4.0 * math.pi)
    return high + low


@dataclass(frozen=True)
class SpectralSamples:
    """φ̂ on a positive momentum grid with dp-weights for ∫ · p dp"""

    p: np.ndarray
    values: np.ndarray
    weights: np.ndarray
    tail_bound: float = 0.0

    def norm_squared(self) -> float:
        return float(np.sum(self.weights * self.p * np.abs(self.values) ** 2))

    def inner(self, other: "SpectralSamples") -> complex:
        return complex(np.sum(self.weights * self.p * self.values * np.conj(other.values)))

    def generator_expectation(self) -> float:
        """⟨φ, Xφ⟩ = Σ w p² |φ̂|²"""
        return float(np.sum(self.weights * self.p ** 2 * np.abs(self.values) ** 2))

    def embedding(self) -> np.ndarray:
        """Vector in ℂᴹ whose Euclidean products reproduce ⟨·,·⟩"""
        return np.sqrt(self.weights * self.p) * self.values


def _piece_fourier(poly: Polynomial, h: float, p: np.ndarray) -> np.ndarray:
    """∫_0^h q(u) e^{ipu} du"""
    coef = np.zeros(4)
    coef[: len(poly.coef)] = poly.coef
    out = np.zeros(p.shape, dtype=complex)
    small = np.abs(p * h) <= 1.0
    if np.any(small):
        ps = p[small]
        total = np.zeros(ps.shape, dtype=complex)
        term = np.ones(ps.shape, dtype=complex)
        for m in range(_TAYLOR_TERMS):
            if m:
                term = term * (1j * ps) / m
            total += term * sum(coef[j] * h ** (j + m + 1) / (j + m + 1) for j in range(4))
        out[small] = total
    large = ~small
    if np.any(large):
        pl = p[large]
        derivs = [Polynomial(coef).deriv(k) if k else Polynomial(coef) for k in range(4)]

        def antiderivative(u: float) -> np.ndarray:
            acc = np.zeros(pl.shape, dtype=complex)
            for k, dq in enumerate(derivs):
                acc += (-1) ** k * dq(u) / (1j * pl) ** (k + 1)
            return np.exp(1j * pl * u) * acc

        out[large] = antiderivative(h) - antiderivative(0.0)
    return out


def fourier_samples(phi: WavePacket, p: np.ndarray) -> np.ndarray:
    """φ̂(p) = (2π)^{-1/2} ∫ φ(x) e^{ipx} dx, exact per piece"""
    total = np.zeros(p.shape, dtype=complex)
    for x0, h, poly in zip(phi.knots[:-1], np.diff(phi.knots), phi.pieces):
        total += np.exp(1j * p * x0) * _piece_fourier(poly, h, p)
    return total / math.sqrt(2.0 * math.pi)


def spectral_embed(phi: WavePacket, grid: Optional[SpectralGrid] = None) -> SpectralSamples:
    grid = grid or SpectralGrid.for_packets(phi)
    tail = grid.check(phi)
    p, w = grid.nodes
    return SpectralSamples(p, fourier_samples(phi, p), w, tail)


def symplectic_form_spectral(phi: WavePacket, psi: WavePacket, grid: Optional[SpectralGrid] = None) -> float:
    """Im⟨φ, ψ⟩ from spectral samples"""
    grid = grid or SpectralGrid.for_packets(phi, psi)
    grid.check(phi, psi)
    return spectral_embed(phi, grid).inner(spectral_embed(psi, grid)).imag


@dataclass
class GeneratorReport:
    generator_expectation: float
    multiplication_residual: float
    commutation_residual: float
    passed: bool


def translation_generator_check(
    phi: WavePacket, s: float = 0.1, t: float = 1.0, grid: Optional[SpectralGrid] = None, tol: Optional[float] = None
) -> GeneratorReport:
    """
    Check U(t) = exp(itX) with X = p ≥ 0 on samples, and
    Δ^{-is} U(t) Δ^{is} = U(e^{2πs} t) on the packet representation.
    """
    tol = get_settings().algebraic_tol if tol is None else tol
    grid = grid or SpectralGrid.for_packets(phi, translate(phi, t))
    samples = spectral_embed(phi, grid)
    shifted = spectral_embed(translate(phi, t), grid)
    scale = max(float(np.max(np.abs(samples.values))), 1e-300)
    mult = float(np.max(np.abs(shifted.values - np.exp(1j * t * samples.p) * samples.values))) / scale
    lhs = modular_flow(translate(modular_flow(phi, s), t), -s)
    rhs = translate(phi, math.exp(2.0 * math.pi * s) * t)
    comm = packet_distance(lhs, rhs)
    gen = samples.generator_expectation()
    passed = gen >= 0.0 and mult <= 1e-8 and comm <= tol
    return GeneratorReport(gen, mult, comm, passed)


def reflection_check(phi: WavePacket, t: float) -> Dict[str, float]:
    """‖JU(t)J − U(−t)‖ and ‖JV(t)J − V(t)‖ on φ"""
    ju = reflect(translate(reflect(phi), t))
    jv = reflect(dilate(reflect(phi), t))
    return {
        "translation": packet_distance(ju, translate(phi, -t)),
        "dilation": packet_distance(jv, dilate(phi, t)),
    }


def inclusion_check(phi: WavePacket, t: float) -> Dict[str, bool]:
    """Support bookkeeping for U(t)H₀ ⊂ H₀ (t ≥ 0) and U(1)H₀ = H₁"""
    a, _ = phi.support
    in_h0 = a >= -_KNOT_TOL
    moved = translate(phi, t)
    back = translate(phi, -1.0)
    return {
        "in_H0": in_h0,
        "translate_stays": (not in_h0) or t < 0 or moved.support[0] >= -_KNOT_TOL,
        "U1_maps_into_H1": (not in_h0) or translate(phi, 1.0).support[0] >= 1.0 - _KNOT_TOL,
        "H1_pulls_back": phi.support[0] < 1.0 - _KNOT_TOL or back.support[0] >= -_KNOT_TOL,
    }


# Profiles


@dataclass
class EntropyProfile:
    lambda_grid: np.ndarray
    S: np.ndarray
    dS: np.ndarray
    d2S: np.ndarray
    kink_mask: np.ndarray
    margins: np.ndarray = field(default_factory=lambda: np.zeros(0))
    convexity_report: List[Tuple[float, float]] = field(default_factory=list)

    def rows(self) -> List[Dict[str, float]]:
        return [
            {
                "lambda": float(l),
                "S": float(s),
                "dS": float(ds),
                "d2S": float(dds),
                "convexity_margin": float(m),
            }
            for l, s, ds, dds, m in zip(self.lambda_grid, self.S, self.dS, self.d2S, self.margins)
        ]

    def monotone_violations(self, tol: Optional[float] = None) -> List[Tuple[float, float]]:
        tol = get_settings().convexity_tol if tol is None else tol
        steps = np.diff(self.S)
        return [(float(self.lambda_grid[i + 1]), float(d)) for i, d in enumerate(steps) if d > tol]


def _second_differences(grid: np.ndarray, values: np.ndarray) -> np.ndarray:
    if grid.size < 3:
        return np.zeros(grid.size)
    h = np.diff(grid)
    slopes = np.diff(values) / h
    inner = 2.0 * np.diff(slopes) / (h[:-1] + h[1:])
    return np.concatenate([[inner[0]], inner, [inner[-1]]])


def convexity_check(profile: EntropyProfile, tol: Optional[float] = None) -> List[Tuple[float, float]]:
    """Grid points whose discrete second difference is below −tol"""
    tol = get_settings().convexity_tol if tol is None else tol
    d2 = _second_differences(profile.lambda_grid, profile.S)
    return [(float(profile.lambda_grid[i]), float(d2[i])) for i in range(1, d2.size - 1) if d2[i] < -tol]


def _validate_grid(lambda_grid: Sequence[float]) -> np.ndarray:
    grid = np.asarray(lambda_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("lambda grid must be strictly increasing")
    return grid


def _finish(profile: EntropyProfile) -> EntropyProfile:
    profile.margins = _second_differences(profile.lambda_grid, profile.S)
    profile.convexity_report = convexity_check(profile)
    return profile


def entropy_profile(phi: WavePacket, lambda_grid: Sequence[float]) -> EntropyProfile:
    """S, S′, S″ on the grid; S″ is right-sided at kinks"""
    grid = _validate_grid(lambda_grid)
    s = np.array([entropy_at(phi, l) for l in grid])
    ds = np.array([entropy_derivative_at(phi, l) for l in grid])
    d2s = np.array([math.pi * phi.derivative(l) ** 2 for l in grid])
    kinks = np.array([phi.is_kink(l) for l in grid], dtype=bool)
    return _finish(EntropyProfile(grid, s, ds, d2s, kinks))


def direct_sum_profile(packets: Sequence[WavePacket], lambda_grid: Sequence[float]) -> EntropyProfile:
    """Profile of ⊕φ_ℓ in a multiplicity model: componentwise sums"""
    grid = _validate_grid(lambda_grid)
    parts = [entropy_profile(p, grid) for p in packets]
    return _finish(
        EntropyProfile(
            grid,
            np.sum([p.S for p in parts], axis=0),
            np.sum([p.dS for p in parts], axis=0),
            np.sum([p.d2S for p in parts], axis=0),
            np.any([p.kink_mask for p in parts], axis=0),
        )
    )


# Finite-dimensional lower bounds


@dataclass
class CrossCheckReport:
    lam: float
    upper: float
    sizes: List[int]
    lower_bounds: List[float]
    monotone: bool
    bounded: bool
    ratio: float
    tail_bound: float
    stopped_early: Optional[str] = None


def _discrete_entropy(phi: WavePacket, family: Sequence[WavePacket], grid: SpectralGrid) -> float:
    if not family:
        return 0.0
    vectors = [spectral_embed(p, grid).embedding() for p in family]
    target = spectral_embed(phi, grid).embedding()
    q = orthonormal_columns(np.column_stack([*vectors, target]), get_settings().rank_tol)
    k = RealSubspace(ComplexSpace(q.shape[1]), q.conj().T @ np.column_stack(vectors))
    return entropy(k, q.conj().T @ target)


def discretized_cross_check(
    phi: WavePacket,
    lam: float,
    family: Sequence[WavePacket],
    sizes: Optional[Sequence[int]] = None,
    grid: Optional[SpectralGrid] = None,
) -> CrossCheckReport:
    """
    Lower bounds on S(λ) from the real span of spectral embeddings of
    family[:k] for each k in `sizes`.
    """
    for member in family:
        if member.support[0] < lam - _KNOT_TOL:
            raise ValueError(f"family member supported at {member.support[0]} < λ = {lam}")
    upper = entropy_at(phi, lam)
    sizes = list(sizes) if sizes is not None else [len(family)]
    if family:
        grid = grid or SpectralGrid.for_packets(phi, *family)
        tail = grid.check(phi, *family)
    else:
        tail = 0.0
    lowers: List[float] = []
    done: List[int] = []
    stopped = None
    for k in sizes:
        try:
            lowers.append(_discrete_entropy(phi, family[:k], grid))
            done.append(k)
        except NumericallySingular as exc:
            stopped = f"size {k}: {exc}"
            logger.warning(f"Cross-check sweep stopped at family size {k}: {exc}")
            break
    slack = max(get_settings().entropy_slack, 1e-7 * max(1.0, upper))
    monotone = all(b >= a - slack for a, b in zip(lowers, lowers[1:]))
    bounded = all(v <= upper + slack + 10.0 * tail for v in lowers)
    ratio = lowers[-1] / upper if lowers and upper > 0 else 0.0
    return CrossCheckReport(lam, upper, done, lowers, monotone, bounded, ratio, tail, stopped)

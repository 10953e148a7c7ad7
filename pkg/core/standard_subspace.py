"""
Finite-dimensional modular calculus for real subspaces of ℂⁿ
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Literal, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg
from scipy.stats import unitary_group

from config import get_settings
from .errors import (
    DimensionMismatch,
    NotAbelian,
    NotFactorial,
    NotStandard,
    NumericallySingular,
)
from .linalg_utils import (
    canonical_phase,
    complex_structure,
    complexify,
    complexify_operator,
    conjugation,
    intersect,
    null_basis,
    numerical_rank,
    orthonormal_columns,
    realify,
    realify_operator,
    subspace_distance,
)

logger = logging.getLogger(__name__)

MapKind = Literal["linear", "antilinear", "neither"]


@dataclass(frozen=True)
class ComplexSpace:
    """ℂⁿ with ⟨x, y⟩ linear in the first slot"""

    n: int

    def inner(self, x: np.ndarray, y: np.ndarray) -> complex:
        return complex(np.vdot(y, x))

    def re_inner(self, x: np.ndarray, y: np.ndarray) -> float:
        return self.inner(x, y).real

    def im_inner(self, x: np.ndarray, y: np.ndarray) -> float:
        return self.inner(x, y).imag


class RealSubspace:
    """Real-linear span of complex vectors, with a cached real-orthonormal basis"""

    def __init__(self, ambient: ComplexSpace, span: np.ndarray, rank_tol: Optional[float] = None):
        span = np.asarray(span, dtype=complex)
        if span.size == 0:
            span = np.zeros((ambient.n, 0), dtype=complex)
        else:
            span = span.reshape(ambient.n, -1)
        self.ambient = ambient
        self.span = span
        self._rank_tol = rank_tol if rank_tol is not None else get_settings().rank_tol

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[complex]], n: Optional[int] = None) -> "RealSubspace":
        vecs = [np.asarray(v, dtype=complex) for v in vectors]
        if n is None:
            if not vecs:
                raise DimensionMismatch("ambient dimension needed for an empty span")
            n = vecs[0].shape[0]
        if any(v.shape != (n,) for v in vecs):
            raise DimensionMismatch(f"span vectors must have length {n}")
        span = np.column_stack(vecs) if vecs else np.zeros((n, 0), dtype=complex)
        return cls(ComplexSpace(n), span)

    @classmethod
    def from_real_basis(cls, ambient: ComplexSpace, basis: np.ndarray) -> "RealSubspace":
        return cls(ambient, complexify(np.asarray(basis, dtype=float).reshape(2 * ambient.n, -1)))

    @cached_property
    def basis(self) -> np.ndarray:
        """2n×d real orthonormal basis w.r.t. Re⟨·,·⟩"""
        return orthonormal_columns(realify(self.span), self._rank_tol)

    @property
    def real_dim(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def complex_basis(self) -> np.ndarray:
        """n×r orthonormal basis of H + iH"""
        return orthonormal_columns(complexify(self.basis), self._rank_tol)

    def project(self, vector: np.ndarray) -> np.ndarray:
        """Re⟨·,·⟩-orthogonal projection onto H"""
        x = realify(vector)
        return complexify(self.basis @ (self.basis.T @ x))

    def contains(self, vector: np.ndarray, tol: Optional[float] = None) -> bool:
        tol = get_settings().subspace_tol if tol is None else tol
        v = np.asarray(vector, dtype=complex)
        scale = max(1.0, float(np.linalg.norm(v)))
        return float(np.linalg.norm(v - self.project(v))) <= tol * scale

    def multiply_by_i(self) -> "RealSubspace":
        return RealSubspace(self.ambient, 1j * complexify(self.basis), self._rank_tol)

    def distance(self, other: "RealSubspace") -> float:
        return subspace_distance(self.basis, other.basis)

    def to_descriptor(self) -> dict:
        vectors = complexify(self.basis).T
        return {
            "ambient_dim": self.ambient.n,
            "span": [[[float(z.real), float(z.imag)] for z in v] for v in vectors],
        }

    def __repr__(self) -> str:
        return f"RealSubspace(n={self.ambient.n}, real_dim={self.real_dim})"


@dataclass(frozen=True)
class RealLinearMap:
    """2n×2n real matrix on the realification of ℂⁿ"""

    matrix: np.ndarray
    kind: MapKind

    @classmethod
    def classify(cls, matrix: np.ndarray, tol: Optional[float] = None) -> "RealLinearMap":
        tol = get_settings().algebraic_tol if tol is None else tol
        n = matrix.shape[0] // 2
        i_mat = complex_structure(n)
        scale = max(1.0, float(np.linalg.norm(matrix)))
        if np.linalg.norm(matrix @ i_mat - i_mat @ matrix) <= tol * scale:
            kind: MapKind = "linear"
        elif np.linalg.norm(matrix @ i_mat + i_mat @ matrix) <= tol * scale:
            kind = "antilinear"
        else:
            kind = "neither"
        return cls(matrix, kind)

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return complexify(self.matrix @ realify(vector))

    def __matmul__(self, other: "RealLinearMap") -> "RealLinearMap":
        return RealLinearMap.classify(self.matrix @ other.matrix)


@dataclass(frozen=True)
class ModularData:
    """Spectral data of Δ and the conjugation J (stored as Jz = U z̄)"""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    unitary: np.ndarray
    tomita: RealLinearMap

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def delta_power(self, exponent: complex) -> np.ndarray:
        v = self.eigenvectors
        return (v * np.exp(exponent * np.log(self.eigenvalues))) @ v.conj().T

    def delta(self) -> np.ndarray:
        return self.delta_power(1.0)

    def modular_group(self, t: float) -> np.ndarray:
        """Δ^{it}"""
        return self.delta_power(1j * t)

    def log_delta(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * np.log(self.eigenvalues)) @ v.conj().T

    def apply_j(self, vector: np.ndarray) -> np.ndarray:
        return self.unitary @ np.conj(np.asarray(vector, dtype=complex))

    def j_real(self) -> np.ndarray:
        return realify_operator(self.unitary) @ conjugation(self.n)

    def spectral_projection(self, value: float, tol: Optional[float] = None) -> np.ndarray:
        """E({value}) as a complex projection"""
        tol = get_settings().eigenvalue_one_tol if tol is None else tol
        sel = np.abs(self.eigenvalues - value) < tol * max(1.0, abs(value))
        v = self.eigenvectors[:, sel]
        return v @ v.conj().T

    def negative_projection(self, tol: Optional[float] = None) -> np.ndarray:
        """E₋: spectral projection of log Δ onto (−∞, 0)"""
        tol = get_settings().eigenvalue_one_tol if tol is None else tol
        v = self.eigenvectors[:, self.eigenvalues < 1.0 - tol]
        return v @ v.conj().T

    def j_squared_residual(self) -> float:
        u = self.unitary
        return float(np.linalg.norm(u @ u.conj() - np.eye(self.n)))

    def jdj_residual(self) -> float:
        """‖JΔJ − Δ⁻¹‖; JΔJ is the complex-linear map U Δ̄ Ū"""
        u = self.unitary
        jdj = u @ np.conj(self.delta()) @ u.conj()
        return float(np.linalg.norm(jdj - self.delta_power(-1.0)))

    def polar_residual(self) -> float:
        """‖S − J Δ^{1/2}‖ in the realification"""
        half = realify_operator(self.delta_power(0.5))
        return float(np.linalg.norm(self.tomita.matrix - self.j_real() @ half))

    def condition_number(self) -> float:
        return float(self.eigenvalues[-1] / self.eigenvalues[0])


@dataclass(frozen=True)
class StandardnessVerdict:
    standard: bool
    reason: Optional[str] = None
    intersection_dim: int = 0
    span_dim: int = 0

    def __bool__(self) -> bool:
        return self.standard


def is_standard(h: RealSubspace) -> StandardnessVerdict:
    """H ∩ iH = {0} and H + iH = ℂⁿ"""
    settings = get_settings()
    n = h.ambient.n
    b = h.basis
    rank = numerical_rank(np.hstack([b, complex_structure(n) @ b]), settings.rank_tol)
    intersection_dim = 2 * h.real_dim - rank
    if intersection_dim > 0:
        return StandardnessVerdict(False, "H∩iH≠0", intersection_dim, rank)
    if rank < 2 * n:
        return StandardnessVerdict(False, "H+iH not dense", intersection_dim, rank)
    return StandardnessVerdict(True, None, 0, rank)


def _require_standard(h: RealSubspace) -> None:
    verdict = is_standard(h)
    if not verdict:
        raise NotStandard(f"subspace is not standard: {verdict.reason}", {"reason": verdict.reason})


def symplectic_complement(h: RealSubspace) -> RealSubspace:
    """H′ = {ψ : Im⟨ψ, φ⟩ = 0 for all φ ∈ H}"""
    n = h.ambient.n
    ib = complex_structure(n) @ h.basis
    basis = null_basis(ib.T, get_settings().rank_tol, cols=2 * n)
    return RealSubspace.from_real_basis(h.ambient, basis)


def _tomita_matrix(h: RealSubspace) -> np.ndarray:
    settings = get_settings()
    b = h.basis
    ib = complex_structure(h.ambient.n) @ b
    frame = np.hstack([b, ib])
    if np.linalg.cond(frame) > settings.condition_cap:
        raise NumericallySingular("frame [B, iB] is ill-conditioned")
    target = np.hstack([b, -ib])
    # S·frame = target
    return linalg.solve(frame.T, target.T).T


def tomita(h: RealSubspace) -> RealLinearMap:
    """S_H(φ + iψ) = φ − iψ for φ, ψ ∈ H"""
    _require_standard(h)
    return RealLinearMap(_tomita_matrix(h), "antilinear")


def modular_data(h: RealSubspace, condition_cap: Optional[float] = None) -> ModularData:
    """Polar decomposition S = JΔ^{1/2} with Δ = S*S"""
    _require_standard(h)
    cap = get_settings().condition_cap if condition_cap is None else condition_cap
    n = h.ambient.n
    s = _tomita_matrix(h)
    delta = complexify_operator(s.T @ s)
    delta = 0.5 * (delta + delta.conj().T)
    eigenvalues, eigenvectors = linalg.eigh(delta)
    if eigenvalues[0] <= 0 or eigenvalues[-1] / eigenvalues[0] > cap:
        raise NumericallySingular(
            "modular operator beyond the condition cap",
            {"min": float(eigenvalues[0]), "max": float(eigenvalues[-1]), "cap": cap},
        )
    eigenvectors = canonical_phase(eigenvectors)
    inv_half = (eigenvectors * eigenvalues ** -0.5) @ eigenvectors.conj().T
    j_real = s @ realify_operator(inv_half)
    unitary = complexify_operator(j_real @ conjugation(n))
    return ModularData(
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        unitary=unitary,
        tomita=RealLinearMap(s, "antilinear"),
    )


def modular_group(h: RealSubspace, t: float) -> np.ndarray:
    """Δ_H^{it} as a complex matrix"""
    return modular_data(h).modular_group(t)


def _abelian_part(h: RealSubspace) -> np.ndarray:
    comp = symplectic_complement(h)
    return intersect(h.basis, comp.basis, get_settings().eigenvalue_one_tol)


def is_factorial(h: RealSubspace) -> bool:
    return _abelian_part(h).shape[1] == 0


def cutting_projection(h: RealSubspace) -> RealLinearMap:
    """Real-linear idempotent with range H and kernel H′"""
    _require_standard(h)
    if not is_factorial(h):
        raise NotFactorial("H ∩ H′ ≠ {0}; the cutting projection is not everywhere defined")
    comp = symplectic_complement(h)
    frame = np.hstack([h.basis, comp.basis])
    if np.linalg.cond(frame) > get_settings().condition_cap:
        raise NumericallySingular("H and H′ are numerically dependent")
    target = np.hstack([h.basis, np.zeros_like(comp.basis)])
    p = linalg.solve(frame.T, target.T).T
    return RealLinearMap.classify(p)


def cutting_projection_relation(h: RealSubspace) -> float:
    """‖−i P_H i − P_{iH}‖"""
    n = h.ambient.n
    i_mat = complex_structure(n)
    p = cutting_projection(h).matrix
    p_ih = cutting_projection(h.multiply_by_i()).matrix
    return float(np.linalg.norm(-i_mat @ p @ i_mat - p_ih))


def factorial_decomposition(h: RealSubspace) -> Tuple[RealSubspace, RealSubspace]:
    """(H ∩ H′, its real-orthogonal complement inside H)"""
    _require_standard(h)
    rank_tol = get_settings().rank_tol
    abelian = _abelian_part(h)
    rest = h.basis - abelian @ (abelian.T @ h.basis)
    factorial = orthonormal_columns(rest, max(rank_tol, 1e-8))
    return (
        RealSubspace.from_real_basis(h.ambient, abelian),
        RealSubspace.from_real_basis(h.ambient, factorial),
    )


def abelian_kernel_distance(h: RealSubspace) -> float:
    """Principal-angle distance between H ∩ H′ and H ∩ ker(1 − Δ_H)"""
    settings = get_settings()
    data = modular_data(h)
    sel = np.abs(data.eigenvalues - 1.0) < settings.eigenvalue_one_tol
    kernel = data.eigenvectors[:, sel]
    kernel_real = orthonormal_columns(
        np.hstack([realify(kernel), realify(1j * kernel)]), settings.rank_tol
    )
    from_kernel = intersect(h.basis, kernel_real, settings.eigenvalue_one_tol)
    return subspace_distance(_abelian_part(h), from_kernel)


def standard_component(h: RealSubspace) -> Tuple[RealSubspace, np.ndarray]:
    """
    Reduce H to its standard part.

    Returns:
        (H_s, Q): H_s in thin coordinates ℂʳ, and the n×r isometry Q onto
        (H + iH) ⊖ (H ∩ iH).
    """
    settings = get_settings()
    n = h.ambient.n
    if h.real_dim == 0:
        return RealSubspace(ComplexSpace(0), np.zeros((0, 0))), np.zeros((n, 0), dtype=complex)
    if is_standard(h):
        return h, np.eye(n, dtype=complex)
    ib = complex_structure(n) @ h.basis
    overlap = intersect(h.basis, ib, settings.eigenvalue_one_tol)
    k = orthonormal_columns(complexify(overlap), settings.rank_tol)
    span = h.complex_basis
    q = orthonormal_columns(span - k @ (k.conj().T @ span), settings.rank_tol)
    reduced = RealSubspace(ComplexSpace(q.shape[1]), q.conj().T @ complexify(h.basis))
    logger.debug(
        "Reduced non-standard subspace",
        extra={"ambient": n, "complex_part": k.shape[1], "standard_dim": q.shape[1]},
    )
    return reduced, q


def abelian_entropy(h: RealSubspace, phi: np.ndarray, tol: Optional[float] = None) -> float:
    """2 Re⟨φ, (1 − E)φ⟩, E the real projection onto H inside H + iH"""
    tol = get_settings().algebraic_tol if tol is None else tol
    n = h.ambient.n
    b = h.basis
    if b.shape[1] == 0:
        return 0.0
    gram = b.T @ complex_structure(n) @ b
    if np.max(np.abs(gram)) > tol:
        raise NotAbelian("Im⟨·,·⟩ does not vanish on H", {"max_im": float(np.max(np.abs(gram)))})
    q = h.complex_basis
    x = realify(q @ (q.conj().T @ np.asarray(phi, dtype=complex)))
    value = 2.0 * (x @ x - np.sum((b.T @ x) ** 2))
    return max(float(value), 0.0)


def _factorial_entropy(h: RealSubspace, phi: np.ndarray) -> float:
    q = h.complex_basis
    thin = RealSubspace(ComplexSpace(q.shape[1]), q.conj().T @ complexify(h.basis))
    x = realify(q.conj().T @ phi)
    data = modular_data(thin)
    p = cutting_projection(thin).matrix
    i_mat = complex_structure(thin.ambient.n)
    log_delta = realify_operator(data.log_delta())
    # −Im⟨φ, P i logΔ φ⟩ with the bracket antilinear in the first slot;
    # x·(I y) is exactly that −Im for real coordinates
    return float(x @ i_mat @ p @ i_mat @ log_delta @ x)


def entropy(h: RealSubspace, phi: np.ndarray) -> float:
    """
    Vector entropy S^H_φ.

    Non-standard H is reduced to its standard component; the abelian and
    factorial parts then contribute additively.
    """
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (h.ambient.n,):
        raise DimensionMismatch(f"vector of length {phi.shape} against ambient {h.ambient.n}")
    reduced, q = standard_component(h)
    if reduced.real_dim == 0:
        return 0.0
    phi_s = q.conj().T @ phi
    abelian, factorial = factorial_decomposition(reduced)
    value = 0.0
    if abelian.real_dim:
        qa = abelian.complex_basis
        value += abelian_entropy(abelian, qa @ (qa.conj().T @ phi_s))
    if factorial.real_dim:
        qf = factorial.complex_basis
        value += _factorial_entropy(factorial, qf @ (qf.conj().T @ phi_s))
    if value < -get_settings().entropy_slack:
        logger.warning(f"Negative entropy {value:.3e} beyond slack")
    return value


def finiteness_functional(h: RealSubspace, phi: np.ndarray, tol: Optional[float] = None) -> float:
    """−Σ_{λ<1} log λ · ‖E({λ})φ‖²"""
    tol = get_settings().eigenvalue_one_tol if tol is None else tol
    data = modular_data(h)
    sel = data.eigenvalues < 1.0 - tol
    weights = np.abs(data.eigenvectors[:, sel].conj().T @ np.asarray(phi, dtype=complex)) ** 2
    return float(-np.sum(np.log(data.eigenvalues[sel]) * weights))


def unitary_transport(u: np.ndarray, h: RealSubspace, tol: Optional[float] = None) -> RealSubspace:
    """UH"""
    tol = get_settings().subspace_tol if tol is None else tol
    u = np.asarray(u, dtype=complex)
    n = h.ambient.n
    if u.shape != (n, n):
        raise DimensionMismatch(f"unitary of shape {u.shape} on ambient dimension {n}")
    if np.linalg.norm(u.conj().T @ u - np.eye(n)) > tol:
        raise ValueError("transport matrix is not unitary")
    return RealSubspace(h.ambient, u @ complexify(h.basis))


def direct_sum(h1: RealSubspace, h2: RealSubspace) -> RealSubspace:
    """H₁ ⊕ H₂ inside ℂ^{n₁} ⊕ ℂ^{n₂}"""
    n1, n2 = h1.ambient.n, h2.ambient.n
    top = np.vstack([complexify(h1.basis), np.zeros((n2, h1.real_dim))])
    bottom = np.vstack([np.zeros((n1, h2.real_dim)), complexify(h2.basis)])
    return RealSubspace(ComplexSpace(n1 + n2), np.hstack([top, bottom]))


def thermal_pair(theta: float) -> RealSubspace:
    """Fixed points of S(a, b) = (λ^{-1/2} b̄, λ^{1/2} ā), λ = e^θ; Δ = diag(e^θ, e^{-θ})"""
    c = np.exp(-theta / 2.0)
    return RealSubspace.from_vectors([[c, 1.0], [-1j * c, 1j]])


def random_standard_subspace(
    n: int,
    rng: np.random.Generator,
    abelian_dim: int = 0,
    log_spread: Tuple[float, float] = (0.2, 2.0),
) -> Tuple[RealSubspace, np.ndarray]:
    """
    Sample a standard subspace with prescribed modular spectrum.

    Thermal pairs (λ, 1/λ) plus `abelian_dim` directions with Δ = 1, rotated
    by a Haar unitary. Returns the subspace and its sorted Δ spectrum.
    """
    if (n - abelian_dim) % 2:
        abelian_dim += 1
    if abelian_dim > n:
        raise DimensionMismatch(f"abelian_dim {abelian_dim} exceeds n={n}")
    pairs = (n - abelian_dim) // 2
    logs = rng.uniform(log_spread[0], log_spread[1], size=pairs)
    vectors = []
    for j, theta in enumerate(logs):
        c = np.exp(-theta / 2.0)
        e = np.zeros(n, dtype=complex)
        f = np.zeros(n, dtype=complex)
        e[2 * j] = 1.0
        f[2 * j + 1] = 1.0
        vectors.append(c * e + f)
        vectors.append(-1j * c * e + 1j * f)
    for k in range(2 * pairs, n):
        g = np.zeros(n, dtype=complex)
        g[k] = 1.0
        vectors.append(g)
    if n == 1:
        w = np.array([[np.exp(2j * np.pi * rng.uniform())]])
    else:
        w = unitary_group.rvs(n, random_state=rng)
    h = RealSubspace(ComplexSpace(n), w @ np.column_stack(vectors))
    spectrum = np.sort(np.concatenate([np.exp(logs), np.exp(-logs), np.ones(abelian_dim)]))
    return h, spectrum

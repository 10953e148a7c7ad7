"""
One-particle structures (ℋ_μ, κ_μ) for finite-dimensional symplectic data
"""
import logging
import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from config import get_settings
from .errors import DimensionMismatch, DominationViolated, NonPositiveParameters
from .linalg_utils import complex_structure, numerical_rank, realify
from .standard_subspace import ComplexSpace, RealSubspace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymplecticData:
    """Phase space ℝᵐ with symplectic form σ and covariance μ"""

    sigma: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=float)
        mu = np.asarray(self.mu, dtype=float)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "mu", mu)
        if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape != mu.shape:
            raise DimensionMismatch(f"sigma {sigma.shape} and mu {mu.shape} must be equal square matrices")
        tol = get_settings().algebraic_tol
        if np.max(np.abs(sigma + sigma.T), initial=0.0) > tol * max(1.0, np.max(np.abs(sigma), initial=0.0)):
            raise ValueError("sigma must be antisymmetric")
        if np.max(np.abs(mu - mu.T), initial=0.0) > tol * max(1.0, np.max(np.abs(mu), initial=0.0)):
            raise ValueError("mu must be symmetric")

    @property
    def m(self) -> int:
        return self.sigma.shape[0]

    def kernel(self) -> np.ndarray:
        """Hermitian K = μ − iσ"""
        return self.mu - 1j * self.sigma

    def to_descriptor(self) -> dict:
        return {"sigma": self.sigma.tolist(), "mu": self.mu.tolist()}


def random_dominated_pair(m: int, rng: np.random.Generator, rank: Optional[int] = None) -> SymplecticData:
    """(σ, μ) read off a random positive Hermitian K = μ − iσ of the given rank"""
    rank = m if rank is None else rank
    a = rng.normal(size=(m, rank)) + 1j * rng.normal(size=(m, rank))
    k = a @ a.conj().T / rank
    return SymplecticData(sigma=-k.imag, mu=k.real)


@dataclass(frozen=True)
class OneParticleStructure:
    """κ: ℝᵐ → ℂʳ, stored as an r×m complex matrix acting on real coordinates"""

    target: ComplexSpace
    kappa: np.ndarray
    data: SymplecticData
    dropped: int = 0

    @property
    def rank(self) -> int:
        return self.target.n

    def apply(self, f: Sequence[float]) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape != (self.data.m,):
            raise DimensionMismatch(f"phase-space vector of length {f.shape} for m={self.data.m}")
        return self.kappa @ f

    def gram(self) -> np.ndarray:
        """G_ij = ⟨κe_i, κe_j⟩"""
        return (self.kappa.conj().T @ self.kappa).T

    def axiom_residual(self) -> float:
        g = self.gram()
        return float(
            max(
                np.max(np.abs(g.real - self.data.mu), initial=0.0),
                np.max(np.abs(g.imag - self.data.sigma), initial=0.0),
            )
        )

    def spans_target(self) -> bool:
        """κ(ℝᵐ) + iκ(ℝᵐ) = ℂʳ"""
        if self.rank == 0:
            return True
        frame = np.hstack([realify(self.kappa), realify(1j * self.kappa)])
        return numerical_rank(frame, get_settings().rank_tol) == 2 * self.rank


def build_one_particle(
    data: SymplecticData,
    tol: Optional[float] = None,
    ordering: Literal["ascending", "descending"] = "ascending",
) -> OneParticleStructure:
    """
    κ = diag(√d)·Vᴴ on the support of K = μ − iσ = V diag(d) Vᴴ.

    Args:
        data: symplectic data (σ, μ)
        tol: relative eigenvalue threshold; defaults to the configured algebraic tolerance
        ordering: eigenpair ordering, only relevant for the uniqueness check

    Returns:
        OneParticleStructure with Re⟨κf,κg⟩ = μ(f,g) and Im⟨κf,κg⟩ = σ(f,g)
    """
    tol = get_settings().algebraic_tol if tol is None else tol
    k = data.kernel()
    d, v = linalg.eigh(k)
    if ordering == "descending":
        d, v = d[::-1], v[:, ::-1]
    scale = max(1.0, float(np.max(np.abs(d), initial=0.0)))
    if d.size and d.min() < -tol * scale:
        raise DominationViolated(
            "μ does not dominate σ: μ − iσ has a negative eigenvalue",
            {"min_eigenvalue": float(d.min())},
        )
    keep = d > tol * scale
    kappa = np.sqrt(d[keep])[:, None] * v[:, keep].conj().T
    dropped = data.m - int(keep.sum())
    if dropped:
        logger.warning(
            f"Degenerate kernel: quotienting {dropped} of {data.m} directions",
            extra={"m": data.m, "rank": int(keep.sum())},
        )
    return OneParticleStructure(ComplexSpace(int(keep.sum())), kappa, data, dropped)


def quasifree_expectation(data: SymplecticData, f: Sequence[float]) -> float:
    """ω(W(f)) = exp(−½ μ(f, f))"""
    f = np.asarray(f, dtype=float)
    return math.exp(-0.5 * float(f @ data.mu @ f))


@dataclass(frozen=True)
class SymplecticFlow:
    """Rotation dynamics T_t at frequency ω"""

    omega: float

    def __call__(self, t: float) -> np.ndarray:
        c, s = math.cos(self.omega * t), math.sin(self.omega * t)
        return np.array([[c, s], [-s, c]])


def thermal_mode(omega: float, beta: float) -> Tuple[SymplecticData, SymplecticFlow]:
    """Quasi-free β-KMS data of one oscillator in normalised coordinates"""
    if omega <= 0 or beta <= 0:
        raise NonPositiveParameters(f"omega={omega} and beta={beta} must be positive")
    sigma = 0.5 * np.array([[0.0, 1.0], [-1.0, 0.0]])
    mu = 0.5 / math.tanh(0.5 * beta * omega) * np.eye(2)
    return SymplecticData(sigma=sigma, mu=mu), SymplecticFlow(omega)


def local_subspace(structure: OneParticleStructure, mask: Sequence[int]) -> RealSubspace:
    """Closed real span of κ over the masked generators"""
    mask = list(mask)
    if any(j < 0 or j >= structure.data.m for j in mask):
        raise DimensionMismatch(f"mask {mask} outside 0..{structure.data.m - 1}")
    return RealSubspace(structure.target, structure.kappa[:, mask])


def symplectic_cross_form(h1: RealSubspace, h2: RealSubspace) -> float:
    """max |Im⟨u, v⟩| over orthonormal bases of H₁ and H₂"""
    if h1.real_dim == 0 or h2.real_dim == 0:
        return 0.0
    return float(np.max(np.abs(h1.basis.T @ complex_structure(h1.ambient.n) @ h2.basis)))


def promote_symplectic_map(structure: OneParticleStructure, t_map: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Unitary U on ℂʳ with U κ(f) = κ(Tf) for σ- and μ-preserving T"""
    tol = get_settings().subspace_tol if tol is None else tol
    t_map = np.asarray(t_map, dtype=float)
    data = structure.data
    if t_map.shape != (data.m, data.m):
        raise DimensionMismatch(f"map of shape {t_map.shape} on m={data.m}")
    if np.linalg.norm(t_map.T @ data.sigma @ t_map - data.sigma) > tol or np.linalg.norm(
        t_map.T @ data.mu @ t_map - data.mu
    ) > tol:
        raise ValueError("map does not preserve both σ and μ")
    u = structure.kappa @ t_map @ linalg.pinv(structure.kappa)
    if np.linalg.norm(u @ structure.kappa - structure.kappa @ t_map) > tol:
        raise ValueError("κ∘T does not factor through a complex-linear map")
    return u

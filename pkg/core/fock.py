"""
Truncated Bose-Fock space: coherent vectors, Weyl operators and the
displaced-thermal relative entropy oracle
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import expm_multiply
from scipy.special import eval_genlaguerre, gammainc, gammaln

from config import get_settings
from .errors import CutoffTooSmall, DimensionMismatch, InvalidState, NotFactorial, NotThermalForm
from .standard_subspace import RealSubspace, is_factorial, modular_data

logger = logging.getLogger(__name__)

MAX_MODES = 3


def _compositions(m: int, total: int) -> List[Tuple[int, ...]]:
    """Multi-indices of length m summing to `total`, lexicographically descending"""
    if m == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        out.extend((first, *rest) for rest in _compositions(m - 1, total - first))
    return out


class FockBasis:
    """Occupation basis {|n⟩ : |n| ≤ N} of m bosonic modes, ordered by total occupation"""

    def __init__(self, modes: int, cutoff: int):
        if modes < 1 or modes > MAX_MODES:
            raise DimensionMismatch(f"{modes} modes requested; supported range is 1..{MAX_MODES}")
        if cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        self.modes = modes
        self.cutoff = cutoff
        self.indices: List[Tuple[int, ...]] = [
            n for total in range(cutoff + 1) for n in _compositions(modes, total)
        ]
        self.lookup: Dict[Tuple[int, ...], int] = {n: k for k, n in enumerate(self.indices)}
        self.occupations = np.array(self.indices, dtype=int).reshape(len(self.indices), modes)
        self.levels = self.occupations.sum(axis=1)

    @property
    def dim(self) -> int:
        return len(self.indices)

    def creation(self, j: int) -> sparse.csr_matrix:
        """a_j† truncated at |n| ≤ N"""
        rows, cols, vals = [], [], []
        for k, n in enumerate(self.indices):
            if self.levels[k] == self.cutoff:
                continue
            raised = list(n)
            raised[j] += 1
            rows.append(self.lookup[tuple(raised)])
            cols.append(k)
            vals.append(math.sqrt(n[j] + 1))
        return sparse.csr_matrix((vals, (rows, cols)), shape=(self.dim, self.dim))

    @cached_property
    def creators(self) -> List[sparse.csr_matrix]:
        return [self.creation(j) for j in range(self.modes)]

    def weyl_generator(self, psi: np.ndarray) -> sparse.csr_matrix:
        """Σ ψ_j a_j† − ψ̄_j a_j"""
        gen = sparse.csr_matrix((self.dim, self.dim), dtype=complex)
        for j, adag in enumerate(self.creators):
            gen = gen + psi[j] * adag - np.conj(psi[j]) * adag.T
        return gen.tocsr()

    def level_mass(self, coeffs: np.ndarray) -> np.ndarray:
        """‖component at total occupation k‖² for k = 0..N"""
        return np.bincount(self.levels, weights=np.abs(coeffs) ** 2, minlength=self.cutoff + 1)


@lru_cache(maxsize=16)
def fock_basis(modes: int, cutoff: int) -> FockBasis:
    return FockBasis(modes, cutoff)


def coherent_tail(norm_squared: float, cutoff: int) -> float:
    """e^{x} − Σ_{k≤N} x^k/k!"""
    if norm_squared <= 0:
        return 0.0
    return float(math.exp(norm_squared) * gammainc(cutoff + 1, norm_squared))


def inner_product_tail(phi: np.ndarray, psi: np.ndarray, cutoff: int) -> float:
    """Bound on |⟨e^φ, e^ψ⟩_N − e^{⟨φ,ψ⟩}|"""
    return coherent_tail(float(np.linalg.norm(phi) * np.linalg.norm(psi)), cutoff)


@dataclass
class TruncatedFockVector:
    basis: FockBasis
    coeffs: np.ndarray
    tail: float = 0.0

    @property
    def modes(self) -> int:
        return self.basis.modes

    @property
    def cutoff(self) -> int:
        return self.basis.cutoff

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: "TruncatedFockVector") -> complex:
        """⟨self, other⟩, linear in the first slot"""
        if other.basis.dim != self.basis.dim:
            raise DimensionMismatch("vectors live on different truncations")
        return complex(np.vdot(other.coeffs, self.coeffs))

    def component(self, occupation: Sequence[int]) -> complex:
        return complex(self.coeffs[self.basis.lookup[tuple(occupation)]])

    def effective_level(self, rel_tol: float = 1e-12) -> int:
        """Smallest L with mass above level L below rel_tol·‖v‖²"""
        mass = self.basis.level_mass(self.coeffs)
        above = np.concatenate([np.cumsum(mass[::-1])[::-1][1:], [0.0]])
        ok = np.flatnonzero(above <= rel_tol * max(mass.sum(), 1e-300))
        return int(ok[0]) if ok.size else self.cutoff


def vacuum(modes: int, cutoff: int) -> TruncatedFockVector:
    basis = fock_basis(modes, cutoff)
    coeffs = np.zeros(basis.dim, dtype=complex)
    coeffs[0] = 1.0
    return TruncatedFockVector(basis, coeffs)


def _vector(phi: Sequence[complex]) -> np.ndarray:
    phi = np.atleast_1d(np.asarray(phi, dtype=complex))
    if phi.ndim != 1:
        raise DimensionMismatch("one-particle vector must be one-dimensional")
    return phi


def coherent_vector(phi: Sequence[complex], cutoff: int, check: bool = True) -> TruncatedFockVector:
    """e^φ = ⊕_n φ^{⊗n}/√(n!) up to |n| ≤ N"""
    phi = _vector(phi)
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    basis = fock_basis(phi.size, cutoff)
    occ = basis.occupations
    log_norm = 0.5 * gammaln(occ + 1).sum(axis=1)
    coeffs = np.prod(phi[None, :] ** occ, axis=1) * np.exp(-log_norm)
    tail = coherent_tail(float(np.vdot(phi, phi).real), cutoff)
    if check and tail > get_settings().coherent_tail_tol:
        raise CutoffTooSmall(f"coherent tail {tail:.3e} at cutoff {cutoff}", tail)
    return TruncatedFockVector(basis, coeffs, tail)


def weyl_apply(psi: Sequence[complex], v: TruncatedFockVector, check: bool = True) -> TruncatedFockVector:
    """W(ψ)v with W(ψ) = exp(Σ ψ_j a_j† − ψ̄_j a_j) on the truncation"""
    psi = _vector(psi)
    if psi.size != v.modes:
        raise DimensionMismatch(f"{psi.size}-mode Weyl operator on a {v.modes}-mode vector")
    out = expm_multiply(v.basis.weyl_generator(psi), v.coeffs)
    # headroom between the occupied levels of v and the cutoff
    level = v.effective_level()
    leak = gammainc(v.cutoff - level + 1, float(np.vdot(psi, psi).real)) if np.any(psi) else 0.0
    tail = v.tail + v.norm() * float(leak)
    if check and tail > get_settings().coherent_tail_tol:
        raise CutoffTooSmall(f"Weyl image tail {tail:.3e} at cutoff {v.cutoff}", tail)
    return TruncatedFockVector(v.basis, out, tail)


def weyl_phase(psi: np.ndarray, phi: np.ndarray) -> complex:
    """c with W(ψ)W(φ) = c·W(ψ+φ)"""
    return complex(np.exp(1j * np.vdot(phi, psi).imag))


def weyl_relation_residual(psi: Sequence[complex], phi: Sequence[complex], cutoff: int) -> float:
    """
    max ‖(W(ψ)W(φ) − e^{i Im⟨ψ,φ⟩} W(ψ+φ)) e_n‖ over occupation vectors with |n| ≤ N/4.
    """
    psi, phi = _vector(psi), _vector(phi)
    if psi.shape != phi.shape:
        raise DimensionMismatch("Weyl arguments differ in mode count")
    basis = fock_basis(psi.size, cutoff)
    probes = np.flatnonzero(basis.levels <= cutoff // 4)
    block = np.zeros((basis.dim, probes.size), dtype=complex)
    block[probes, np.arange(probes.size)] = 1.0
    lhs = expm_multiply(basis.weyl_generator(psi), expm_multiply(basis.weyl_generator(phi), block))
    rhs = weyl_phase(psi, phi) * expm_multiply(basis.weyl_generator(psi + phi), block)
    return float(np.max(np.linalg.norm(lhs - rhs, axis=0)))


def vacuum_expectation(kappa_f: Sequence[complex], cutoff: Optional[int] = None) -> complex:
    """⟨ξ, W(κf) ξ⟩ on the truncation"""
    cutoff = get_settings().fock_cutoff if cutoff is None else cutoff
    vec = _vector(kappa_f)
    if vec.size == 0:
        return 1.0 + 0.0j
    image = weyl_apply(vec, vacuum(vec.size, cutoff))
    return complex(image.coeffs[0])


@dataclass
class SecondQuantizedSpectrum:
    """Γ(Δ) eigenvalues Π λ_j^{n_j}, ordered as the basis multi-indices"""

    basis: FockBasis
    one_particle: np.ndarray
    eigenvalues: np.ndarray

    def level(self, total: int) -> np.ndarray:
        return np.sort(self.eigenvalues[self.basis.levels == total])


def second_quantized_modular(
    h: Union[RealSubspace, Sequence[float]], cutoff: Optional[int] = None
) -> SecondQuantizedSpectrum:
    """Γ(Δ_H) on |n| ≤ N; also accepts the one-particle spectrum directly"""
    cutoff = get_settings().fock_cutoff if cutoff is None else cutoff
    if isinstance(h, RealSubspace):
        data = modular_data(h)
        if not is_factorial(h):
            raise NotFactorial("second quantization of Δ_H requires a factorial H")
        lam = data.eigenvalues
    else:
        lam = np.asarray(h, dtype=float)
    basis = fock_basis(lam.size, cutoff)
    values = np.exp(basis.occupations @ np.log(lam))
    return SecondQuantizedSpectrum(basis, lam, values)


def thermal_occupation(theta: float, cutoff: Optional[int] = None) -> Tuple[float, np.ndarray]:
    """
    Mean occupation and weights of the vacuum restricted to one thermal block.

    The weights are the normalised Γ(Δ) eigenvalues of the e^{-θ} mode, so
    n̄ = 1/(e^θ − 1) up to the thermal tail.
    """
    cutoff = get_settings().fock_cutoff if cutoff is None else cutoff
    if theta <= 0:
        raise NotThermalForm(f"thermal block needs θ > 0, got {theta}")
    q = math.exp(-theta)
    tail = q ** (cutoff + 1)
    if tail > get_settings().thermal_tail_tol:
        raise CutoffTooSmall(f"thermal tail {tail:.3e} at cutoff {cutoff}", tail)
    weights = second_quantized_modular([q], cutoff).eigenvalues
    weights = weights / weights.sum()
    return float(np.arange(cutoff + 1) @ weights), weights


def displacement_matrix(alpha: complex, cutoff: int) -> np.ndarray:
    """⟨m|exp(α a† − ᾱ a)|n⟩ for m, n ≤ N"""
    m, n = np.meshgrid(np.arange(cutoff + 1), np.arange(cutoff + 1), indexing="ij")
    x = abs(alpha) ** 2
    lo, hi = np.minimum(m, n), np.maximum(m, n)
    prefactor = np.exp(0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) - 0.5 * x)
    lag = eval_genlaguerre(lo, hi - lo, x)
    power = np.where(m >= n, alpha ** (m - n).clip(0), (-np.conj(alpha)) ** (n - m).clip(0))
    return prefactor * power * lag


@dataclass
class DensityMatrix:
    """
    Positive Hermitian matrix of trace one, or of trace 1 − δ with
    δ ≤ `max_deficit` when it is the truncation of a state.
    """

    matrix: np.ndarray
    max_deficit: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"density matrix of shape {m.shape}")
        tol = get_settings().algebraic_tol
        size = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        skew = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if skew > tol * size:
            raise InvalidState(f"density matrix is not Hermitian (skew {skew:.3e})", {"skew": skew})
        self.matrix = 0.5 * (m + m.conj().T)
        low = float(self.eigenvalues.min()) if m.size else 0.0
        if low < -tol * size:
            raise InvalidState(f"density matrix has eigenvalue {low:.3e}", {"min_eigenvalue": low})
        trace = self.trace
        if trace > 1.0 + tol or trace < 1.0 - max(self.max_deficit, tol):
            raise InvalidState(f"density matrix has trace {trace:.12f}", {"trace": trace})

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return linalg.eigvalsh(self.matrix)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def relative_entropy_to_diagonal(self, log_weights: np.ndarray) -> float:
        """Tr ρ(log ρ − log σ) for σ diagonal with the given log-weights"""
        ev = np.clip(self.eigenvalues, 0.0, None)
        nz = ev > 0
        neg_entropy = float(np.sum(ev[nz] * np.log(ev[nz])))
        return neg_entropy - float(np.real(np.diag(self.matrix)) @ log_weights)


@dataclass
class BlockTerm:
    theta: float
    alpha: complex
    value: float
    first_quantized: float
    trace_deficit: float
    thermal_tail: float


@dataclass
class OracleReport:
    value: float
    blocks: List[BlockTerm] = field(default_factory=list)

    @property
    def first_quantized(self) -> float:
        return sum(b.first_quantized for b in self.blocks)


def _thermal_blocks(h: RealSubspace) -> List[Tuple[float, np.ndarray, np.ndarray]]:
    """(θ, e₊, Je₊) for each Δ eigenvector with eigenvalue e^θ > 1"""
    data = modular_data(h)
    tol = get_settings().eigenvalue_one_tol
    if np.any(np.abs(data.eigenvalues - 1.0) < tol):
        raise NotThermalForm("Δ has eigenvalue 1; H is not a sum of thermal blocks")
    blocks = []
    for k in np.flatnonzero(data.eigenvalues > 1.0):
        e_plus = data.eigenvectors[:, k]
        blocks.append((float(np.log(data.eigenvalues[k])), e_plus, data.apply_j(e_plus)))
    if 2 * len(blocks) != h.ambient.n:
        raise NotThermalForm("Δ spectrum is not paired as {λ, 1/λ}")
    return blocks


def _block_entropy(theta: float, alpha: complex, cutoff: int) -> BlockTerm:
    _, weights = thermal_occupation(theta, cutoff)
    q = math.exp(-theta)
    log_weights = math.log1p(-q) - theta * np.arange(cutoff + 1)
    d = displacement_matrix(alpha, cutoff)
    rho = DensityMatrix(d @ np.diag(weights) @ d.conj().T, max_deficit=1.0)
    deficit = 1.0 - rho.trace
    if deficit > 100 * get_settings().coherent_tail_tol:
        raise CutoffTooSmall(f"displaced thermal state loses {deficit:.3e} of its trace at cutoff {cutoff}", deficit)
    value = rho.relative_entropy_to_diagonal(log_weights)
    return BlockTerm(theta, alpha, value, theta * abs(alpha) ** 2, deficit, q ** (cutoff + 1))


def araki_relative_entropy_blocks(
    h: RealSubspace, phi: Sequence[complex], cutoff: Optional[int] = None
) -> OracleReport:
    """
    Relative entropy of the coherent state of φ against the vacuum on the
    second quantisation of H, block by block.

    Each pair (e₊, Je₊) carries a one-mode thermal state with q = e^{-θ};
    the coherent state displaces it by α = cosh r·φ₋ − sinh r·conj(φ₊)
    with tanh r = e^{-θ/2}.
    """
    cutoff = get_settings().fock_cutoff if cutoff is None else cutoff
    phi = _vector(phi)
    if phi.size != h.ambient.n:
        raise DimensionMismatch(f"vector of length {phi.size} against ambient {h.ambient.n}")
    terms = []
    for theta, e_plus, e_minus in _thermal_blocks(h):
        r = math.atanh(math.exp(-theta / 2.0))
        alpha = complex(math.cosh(r) * np.vdot(e_minus, phi) - math.sinh(r) * np.conj(np.vdot(e_plus, phi)))
        terms.append(_block_entropy(theta, alpha, cutoff))
    logger.debug(
        "Oracle blocks evaluated",
        extra={"blocks": len(terms), "cutoff": cutoff},
    )
    return OracleReport(sum(t.value for t in terms), terms)


def araki_relative_entropy_oracle(h: RealSubspace, phi: Sequence[complex], cutoff: Optional[int] = None) -> float:
    """Single thermal block in ℂ²"""
    if h.ambient.n != 2:
        raise NotThermalForm(f"thermal building block lives in ℂ², got ℂ^{h.ambient.n}")
    return max(araki_relative_entropy_blocks(h, phi, cutoff).value, 0.0)

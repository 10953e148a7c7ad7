"""
Realification helpers, subspace utilities and the counter-based RNG
"""
from typing import Optional, Sequence

import numpy as np
from scipy import linalg


def realify(z: np.ndarray) -> np.ndarray:
    """ℂⁿ (or n×k) -> ℝ²ⁿ (or 2n×k), stacking real over imaginary parts"""
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=0)


def complexify(x: np.ndarray) -> np.ndarray:
    """Inverse of realify"""
    x = np.asarray(x, dtype=float)
    n = x.shape[0] // 2
    return x[:n] + 1j * x[n:]


def complex_structure(n: int) -> np.ndarray:
    """Multiplication by i on the realification of ℂⁿ"""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def conjugation(n: int) -> np.ndarray:
    """Complex conjugation on the realification of ℂⁿ"""
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)]))


def realify_operator(a: np.ndarray) -> np.ndarray:
    """Real 2n×2n matrix of a complex-linear n×n operator"""
    a = np.asarray(a, dtype=complex)
    return np.block([[a.real, -a.imag], [a.imag, a.real]])


def complexify_operator(r: np.ndarray) -> np.ndarray:
    """Complex n×n matrix of a real 2n×2n map commuting with the complex structure"""
    n = r.shape[0] // 2
    return r[:n, :n] + 1j * r[n:, :n]


def inner(x: np.ndarray, y: np.ndarray) -> complex:
    """⟨x, y⟩, linear in the first slot"""
    return complex(np.vdot(y, x))


def numerical_rank(m: np.ndarray, rel_tol: float) -> int:
    if m.size == 0:
        return 0
    s = linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * max(s[0], 1.0)))


def orthonormal_columns(m: np.ndarray, rel_tol: float) -> np.ndarray:
    """Orthonormal basis of the column span (real or complex), thresholded SVD"""
    m = np.asarray(m)
    rows = m.shape[0]
    if m.ndim != 2 or m.shape[1] == 0:
        return np.zeros((rows, 0), dtype=m.dtype)
    u, s, _ = linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((rows, 0), dtype=m.dtype)
    keep = s > rel_tol * max(s[0], 1.0)
    return u[:, keep]


def null_basis(m: np.ndarray, rel_tol: float, cols: Optional[int] = None) -> np.ndarray:
    """Orthonormal basis of ker(m); an m with no rows has the full space as kernel"""
    m = np.asarray(m)
    if m.shape[0] == 0:
        return np.eye(cols if cols is not None else m.shape[1])
    return linalg.null_space(m, rcond=rel_tol)


def intersect(a: np.ndarray, b: np.ndarray, rel_tol: float) -> np.ndarray:
    """Orthonormal basis of span(a) ∩ span(b) for orthonormal-column inputs"""
    if a.shape[1] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], 0), dtype=a.dtype)
    # x in both spans iff its projections agree
    pa = a @ a.conj().T
    pb = b @ b.conj().T
    stacked = np.vstack([np.eye(a.shape[0]) - pa, np.eye(a.shape[0]) - pb])
    return null_basis(stacked, rel_tol)


def subspace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Sine of the largest principal angle; 1 when dimensions differ"""
    if a.shape[1] != b.shape[1]:
        return 1.0
    if a.shape[1] == 0:
        return 0.0
    angles = linalg.subspace_angles(a, b)
    return float(np.sin(np.max(angles)))


def canonical_phase(vectors: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate each column so its first non-negligible component is real positive"""
    out = np.array(vectors, dtype=complex, copy=True)
    for j in range(out.shape[1]):
        col = out[:, j]
        idx = np.flatnonzero(np.abs(col) > tol)
        if idx.size:
            lead = col[idx[0]]
            out[:, j] = col * (np.abs(lead) / lead)
    return out


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Counter-based generator keyed by (seed, *keys)"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *keys])))


def as_complex_vector(data: Sequence) -> np.ndarray:
    """Accept complex arrays or [[re, im], ...] pairs"""
    arr = np.asarray(data)
    if np.iscomplexobj(arr):
        return arr.astype(complex)
    if arr.ndim >= 2 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    return arr.astype(complex)

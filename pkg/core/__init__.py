"""
Core package - numerical modules for modular theory and entropy
"""
__all__ = [
    "errors",
    "linalg_utils",
    "standard_subspace",
    "schrodinger_ray",
    "one_particle",
    "fock",
    "geometry",
]

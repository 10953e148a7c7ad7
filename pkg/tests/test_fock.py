import math

import numpy as np
import pytest

from core.errors import CutoffTooSmall, DimensionMismatch, InvalidState, NotThermalForm
from core.fock import (
    DensityMatrix,
    FockBasis,
    araki_relative_entropy_blocks,
    araki_relative_entropy_oracle,
    coherent_vector,
    displacement_matrix,
    inner_product_tail,
    second_quantized_modular,
    thermal_occupation,
    vacuum,
    vacuum_expectation,
    weyl_apply,
    weyl_relation_residual,
)
from core.standard_subspace import direct_sum, entropy, thermal_pair

PHI = np.array([0.3 + 0.1j, -0.2j])
PSI = np.array([0.1, 0.4 - 0.2j])


def test_basis_dimension_and_ordering():
    basis = FockBasis(2, 5)
    assert basis.dim == 21
    assert basis.indices[0] == (0, 0)
    assert list(basis.levels) == sorted(basis.levels)


def test_basis_mode_limit():
    with pytest.raises(DimensionMismatch):
        FockBasis(4, 2)


def test_coherent_inner_product():
    truncated = coherent_vector(PHI, 40).inner(coherent_vector(PSI, 40))
    exact = np.exp(np.vdot(PSI, PHI))
    assert abs(truncated - exact) <= 1e-12 + inner_product_tail(PHI, PSI, 40)


def test_coherent_vector_cutoff_guard():
    with pytest.raises(CutoffTooSmall) as info:
        coherent_vector([3.0], 5)
    assert info.value.tail > 1e-8


def test_vacuum_expectation():
    expected = math.exp(-0.5 * float(np.vdot(PSI, PSI).real))
    assert abs(vacuum_expectation(PSI, 40) - expected) < 1e-10
    assert vacuum_expectation([], 10) == 1.0


def test_weyl_on_vacuum_is_normalised_coherent():
    moved = weyl_apply(PSI, vacuum(2, 40))
    target = math.exp(-0.5 * float(np.vdot(PSI, PSI).real)) * coherent_vector(PSI, 40).coeffs
    np.testing.assert_allclose(moved.coeffs, target, atol=1e-10)


def test_weyl_relation():
    assert weyl_relation_residual(PSI, PHI, 40) < 1e-6


def test_weyl_dimension_check():
    with pytest.raises(DimensionMismatch):
        weyl_apply([0.1], vacuum(2, 10))


def test_second_quantized_levels():
    e = math.e
    levels = second_quantized_modular([e, 1.0 / e], 2).level(2)
    np.testing.assert_allclose(levels, [e**-2, 1.0, e**2], rtol=1e-12)


def test_second_quantized_from_subspace(pair, theta):
    spectrum = second_quantized_modular(pair, 3)
    np.testing.assert_allclose(spectrum.level(1), [math.exp(-theta), math.exp(theta)], rtol=1e-10)


@pytest.mark.parametrize("theta", [0.5, 1.0, 2.0])
def test_thermal_occupation(theta):
    mean, weights = thermal_occupation(theta, 60)
    assert mean == pytest.approx(1.0 / math.expm1(theta), rel=1e-10)
    assert weights.sum() == pytest.approx(1.0)


def test_thermal_occupation_guards():
    with pytest.raises(NotThermalForm):
        thermal_occupation(0.0, 10)
    with pytest.raises(CutoffTooSmall):
        thermal_occupation(0.1, 10)


def test_displacement_is_unitary_on_low_levels():
    d = displacement_matrix(0.3 - 0.2j, 40)
    block = (d.conj().T @ d)[:10, :10]
    np.testing.assert_allclose(block, np.eye(10), atol=1e-10)


@pytest.mark.parametrize("theta", [0.5, 1.0, 2.0])
def test_oracle_matches_first_quantized_entropy(theta):
    h = thermal_pair(theta)
    phi = np.array([0.3, 0.4j])
    first = entropy(h, phi)
    assert araki_relative_entropy_oracle(h, phi, 60) == pytest.approx(first, rel=1e-4)
    report = araki_relative_entropy_blocks(h, phi, 60)
    assert report.first_quantized == pytest.approx(first, rel=1e-8)


def test_oracle_vanishes_on_complement(pair, theta):
    phi = np.array([1.0, math.exp(-theta / 2.0)])
    assert araki_relative_entropy_oracle(pair, phi, 60) == pytest.approx(0.0, abs=1e-8)


def test_oracle_blocks_add():
    h = direct_sum(thermal_pair(0.5), thermal_pair(2.0))
    phi = np.array([0.2, 0.1j, -0.3, 0.25])
    joint = araki_relative_entropy_blocks(h, phi, 60)
    assert len(joint.blocks) == 2
    parts = araki_relative_entropy_oracle(thermal_pair(0.5), phi[:2], 60) + araki_relative_entropy_oracle(
        thermal_pair(2.0), phi[2:], 60
    )
    assert joint.value == pytest.approx(parts, rel=1e-6)


def test_oracle_needs_thermal_form():
    with pytest.raises(NotThermalForm):
        araki_relative_entropy_oracle(direct_sum(thermal_pair(1.0), thermal_pair(1.0)), np.zeros(4), 20)


def test_density_matrix_accepts_states():
    rho = DensityMatrix(np.diag([0.25, 0.75]))
    assert rho.trace == pytest.approx(1.0)
    np.testing.assert_allclose(rho.eigenvalues, [0.25, 0.75])
    assert DensityMatrix(np.diag([0.2, 0.7]), max_deficit=0.2).trace == pytest.approx(0.9)


@pytest.mark.parametrize(
    "matrix,key",
    [
        (np.array([[0.5, 0.3], [0.0, 0.5]]), "skew"),
        (np.diag([1.5, -0.5]), "min_eigenvalue"),
        (np.diag([0.25, 0.25]), "trace"),
        (np.diag([0.75, 0.75]), "trace"),
    ],
)
def test_density_matrix_rejects_invalid_states(matrix, key):
    with pytest.raises(InvalidState) as info:
        DensityMatrix(matrix)
    assert key in info.value.context


def test_density_matrix_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        DensityMatrix(np.ones((2, 3)) / 6.0)

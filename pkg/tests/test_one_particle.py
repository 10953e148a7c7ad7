import math

import numpy as np
import pytest
from scipy.linalg import block_diag

from core.errors import DimensionMismatch, DominationViolated, NonPositiveParameters
from core.fock import vacuum_expectation
from core.linalg_utils import make_rng
from core.one_particle import (
    SymplecticData,
    build_one_particle,
    local_subspace,
    promote_symplectic_map,
    quasifree_expectation,
    random_dominated_pair,
    symplectic_cross_form,
    thermal_mode,
)
from core.standard_subspace import is_standard


def test_thermal_mode_structure():
    data, _ = thermal_mode(1.0, 1.0)
    structure = build_one_particle(data)
    assert structure.rank == 2
    assert structure.dropped == 0
    assert structure.axiom_residual() < 1e-10
    assert structure.spans_target()
    assert is_standard(local_subspace(structure, [0, 1]))


def test_domination_violated():
    data = SymplecticData(np.array([[0.0, 1.0], [-1.0, 0.0]]), 0.5 * np.eye(2))
    with pytest.raises(DominationViolated) as info:
        build_one_particle(data)
    assert info.value.context["min_eigenvalue"] == pytest.approx(-0.5)


def test_symplectic_data_validation():
    with pytest.raises(ValueError):
        SymplecticData(np.array([[0.0, 1.0], [1.0, 0.0]]), np.eye(2))
    with pytest.raises(DimensionMismatch):
        SymplecticData(np.zeros((2, 2)), np.eye(3))


@pytest.mark.parametrize("omega,beta", [(0.0, 1.0), (1.0, -2.0)])
def test_thermal_mode_needs_positive_parameters(omega, beta):
    with pytest.raises(NonPositiveParameters):
        thermal_mode(omega, beta)


def test_degenerate_kernel_is_quotiented():
    data = random_dominated_pair(4, make_rng(1, 1), rank=2)
    structure = build_one_particle(data)
    assert structure.rank == 2
    assert structure.dropped == 2
    assert structure.axiom_residual() < 1e-10


def test_ordering_does_not_change_gram():
    data = random_dominated_pair(5, make_rng(2, 1))
    ascending = build_one_particle(data)
    descending = build_one_particle(data, ordering="descending")
    np.testing.assert_allclose(ascending.gram(), descending.gram(), atol=1e-10)


def test_block_locality():
    left = random_dominated_pair(2, make_rng(3, 1))
    right = random_dominated_pair(2, make_rng(3, 2))
    joint = build_one_particle(SymplecticData(block_diag(left.sigma, right.sigma), block_diag(left.mu, right.mu)))
    cross = symplectic_cross_form(local_subspace(joint, [0, 1]), local_subspace(joint, [2, 3]))
    assert cross < 1e-12


def test_local_subspace_mask_checked():
    data, _ = thermal_mode(1.0, 1.0)
    with pytest.raises(DimensionMismatch):
        local_subspace(build_one_particle(data), [0, 2])


def test_quasifree_state_matches_fock_vacuum():
    data, _ = thermal_mode(1.0, 2.0)
    structure = build_one_particle(data)
    f = np.array([0.3, -0.2])
    probe = vacuum_expectation(structure.apply(f), cutoff=30)
    assert abs(probe - quasifree_expectation(data, f)) < 1e-8


def test_flow_promotes_to_unitary():
    data, flow = thermal_mode(1.3, 0.7)
    structure = build_one_particle(data)
    u = promote_symplectic_map(structure, flow(0.4))
    np.testing.assert_allclose(u.conj().T @ u, np.eye(2), atol=1e-8)
    f = np.array([0.5, 1.5])
    np.testing.assert_allclose(u @ structure.apply(f), structure.apply(flow(0.4) @ f), atol=1e-8)


def test_promotion_rejects_non_symplectic_map():
    data, _ = thermal_mode(1.0, 1.0)
    with pytest.raises(ValueError):
        promote_symplectic_map(build_one_particle(data), np.diag([2.0, 0.5]))


def test_quasifree_expectation_closed_form():
    data, _ = thermal_mode(1.0, 1.0)
    f = np.array([1.0, 0.0])
    expected = math.exp(-0.25 / math.tanh(0.5))
    assert quasifree_expectation(data, f) == pytest.approx(expected)

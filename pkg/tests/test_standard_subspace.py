import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import unitary_group

from core.errors import DimensionMismatch, NotAbelian, NotStandard
from core.linalg_utils import complexify, make_rng
from core.standard_subspace import (
    RealSubspace,
    abelian_entropy,
    abelian_kernel_distance,
    cutting_projection_relation,
    direct_sum,
    entropy,
    finiteness_functional,
    is_factorial,
    is_standard,
    modular_data,
    random_standard_subspace,
    symplectic_complement,
    tomita,
    unitary_transport,
)


def test_thermal_pair_is_standard_and_factorial(pair):
    assert is_standard(pair)
    assert is_factorial(pair)


def test_thermal_pair_spectrum_and_conjugation(pair, theta):
    data = modular_data(pair)
    assert_allclose(data.eigenvalues, [math.exp(-theta), math.exp(theta)], rtol=1e-12)
    assert data.jdj_residual() < 1e-10
    assert data.j_squared_residual() < 1e-10
    assert data.polar_residual() < 1e-10


def test_tomita_fixes_subspace(pair):
    s = tomita(pair)
    assert s.kind == "antilinear"
    for u in complexify(pair.basis).T:
        assert_allclose(s.apply(u), u, atol=1e-12)


@pytest.mark.parametrize("theta", [0.5, 1.0, 2.0])
def test_thermal_entropy_closed_form(pair, theta):
    c = math.exp(-theta / 2.0)
    value = entropy(pair, np.array([c, 1.0]))
    assert value == pytest.approx(theta * (1.0 - math.exp(-theta)), abs=1e-10)


def test_entropy_vanishes_on_symplectic_complement(pair, theta):
    c = math.exp(-theta / 2.0)
    h_prime = np.array([1.0, c])
    assert symplectic_complement(pair).contains(h_prime)
    assert abs(entropy(pair, h_prime)) < 1e-10


def test_entropy_below_finiteness_functional(pair, theta):
    c = math.exp(-theta / 2.0)
    phi = np.array([c, 1.0])
    bound = finiteness_functional(pair, phi)
    assert bound == pytest.approx(theta, rel=1e-10)
    assert entropy(pair, phi) <= bound + 1e-12


def test_non_standard_subspaces_are_rejected():
    complex_line = RealSubspace.from_vectors([[1.0], [1j]])
    verdict = is_standard(complex_line)
    assert not verdict
    assert verdict.reason == "H∩iH≠0"
    assert verdict.intersection_dim == 2

    thin = RealSubspace.from_vectors([[1.0, 0.0]])
    assert is_standard(thin).reason == "H+iH not dense"
    with pytest.raises(NotStandard):
        tomita(thin)


def test_entropy_reduces_to_abelian_part():
    # ℝ·e₁ in ℂ²: standard part ℝ ⊂ ℂ, which is abelian
    h = RealSubspace.from_vectors([[1.0, 0.0]])
    assert entropy(h, np.array([1.0, 5.0])) == pytest.approx(0.0, abs=1e-12)
    assert entropy(h, np.array([1j, 5.0])) == pytest.approx(2.0, rel=1e-12)


def test_abelian_entropy_rejects_non_abelian(pair):
    with pytest.raises(NotAbelian):
        abelian_entropy(pair, np.array([1.0, 0.0]))


def test_entropy_dimension_check(pair):
    with pytest.raises(DimensionMismatch):
        entropy(pair, np.ones(3))


def test_cutting_projection_relation(pair):
    assert cutting_projection_relation(pair) < 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_random_spectrum_matches_modular_data(seed):
    rng = make_rng(seed, 1)
    h, spectrum = random_standard_subspace(5, rng, abelian_dim=1)
    assert_allclose(modular_data(h).eigenvalues, spectrum, rtol=1e-8)


def test_abelian_part_is_the_fixed_kernel():
    h, _ = random_standard_subspace(4, make_rng(3, 1), abelian_dim=2)
    assert not is_factorial(h)
    assert abelian_kernel_distance(h) < 1e-6


def test_modular_group_leaves_subspace_invariant():
    h, _ = random_standard_subspace(6, make_rng(4, 1))
    rotated = RealSubspace(h.ambient, modular_data(h).modular_group(0.37) @ complexify(h.basis))
    assert h.distance(rotated) < 1e-8


def test_entropy_axioms_on_random_subspace():
    rng = make_rng(7, 2)
    h, _ = random_standard_subspace(4, rng)
    phi = rng.normal(size=4) + 1j * rng.normal(size=4)
    value = entropy(h, phi)
    assert value >= -1e-10

    sub = RealSubspace(h.ambient, complexify(h.basis[:, :2]))
    assert entropy(sub, phi) <= value + 1e-9

    u = unitary_group.rvs(4, random_state=rng)
    assert entropy(unitary_transport(u, h), u @ phi) == pytest.approx(value, abs=1e-9)

    h2, _ = random_standard_subspace(2, rng)
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    joint = entropy(direct_sum(h, h2), np.concatenate([phi, psi]))
    assert joint == pytest.approx(value + entropy(h2, psi), abs=1e-9)


def test_unitary_transport_rejects_non_unitary(pair):
    with pytest.raises(ValueError):
        unitary_transport(2.0 * np.eye(2), pair)


def test_descriptor_round_trip_keeps_dimension(pair):
    desc = pair.to_descriptor()
    assert desc["ambient_dim"] == 2
    assert len(desc["span"]) == pair.real_dim == 2

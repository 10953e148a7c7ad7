import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from core.errors import KinkPoint
from core.linalg_utils import make_rng
from core.schrodinger_ray import (
    WavePacket,
    dilate,
    direct_sum_profile,
    discretized_cross_check,
    entropy_at,
    entropy_derivative_at,
    entropy_form,
    entropy_profile,
    entropy_second_derivative_at,
    inclusion_check,
    modular_flow,
    modular_generator_form,
    packet_distance,
    random_packet,
    reflect,
    reflection_check,
    spectral_embed,
    symplectic_form,
    symplectic_form_spectral,
    translate,
    translation_generator_check,
)

TENT_VALUES = [
    (0.0, 2 * math.pi),
    (0.5, 9 * math.pi / 8),
    (1.0, math.pi / 2),
    (1.5, math.pi / 8),
    (2.0, 0.0),
    (2.5, 0.0),
]


@pytest.fixture
def tent() -> WavePacket:
    return WavePacket.tent()


@pytest.mark.parametrize("lam,expected", TENT_VALUES)
def test_tent_entropy_values(tent, lam, expected):
    assert entropy_at(tent, lam) == pytest.approx(expected, abs=1e-12)


def test_tent_derivatives(tent):
    assert entropy_derivative_at(tent, 0.0) == pytest.approx(-2 * math.pi, abs=1e-12)
    assert entropy_derivative_at(tent, 1.5) == pytest.approx(-0.5 * math.pi, abs=1e-12)
    assert entropy_second_derivative_at(tent, 0.5) == pytest.approx(math.pi, abs=1e-12)


def test_second_derivative_at_kink_reports_both_sides(tent):
    with pytest.raises(KinkPoint) as info:
        entropy_second_derivative_at(tent, 1.0)
    assert info.value.left == pytest.approx(math.pi)
    assert info.value.right == pytest.approx(math.pi)
    assert info.value.context["at"] == 1.0


def test_packet_validation():
    with pytest.raises(ValueError):
        WavePacket.piecewise_linear([0.0, 1.0, 2.0], [0.0, 1.0, 0.5])
    with pytest.raises(ValueError):
        WavePacket.from_pieces([0.0, 1.0, 2.0], [Polynomial([0.0, 1.0]), Polynomial([0.5, -0.5])])


def test_bump_is_c1(tent):
    bump = WavePacket.bump(center=1.0, radius=1.0)
    assert bump.kinks.size == 0
    assert tent.kinks.tolist() == [0.0, 1.0, 2.0]


def test_profile_on_tent(tent):
    profile = entropy_profile(tent, [lam for lam, _ in TENT_VALUES])
    assert profile.convexity_report == []
    assert profile.monotone_violations() == []
    assert profile.kink_mask.tolist() == [True, False, True, False, True, False]
    rows = profile.rows()
    assert [r["lambda"] for r in rows] == [0.0, 0.5, 1.0, 1.5, 2.0, 2.5]
    assert set(rows[0]) == {"lambda", "S", "dS", "d2S", "convexity_margin"}


def test_profile_rejects_unsorted_grid(tent):
    with pytest.raises(ValueError):
        entropy_profile(tent, [1.0, 0.5])


def test_direct_sum_profile_adds(tent):
    other = WavePacket.bump(center=2.0, radius=0.5)
    grid = np.linspace(0.0, 3.0, 13)
    joint = direct_sum_profile([tent, other], grid)
    np.testing.assert_allclose(joint.S, entropy_profile(tent, grid).S + entropy_profile(other, grid).S)
    assert joint.convexity_report == []


@pytest.mark.parametrize("lam", [0.4, 1.3, 2.5])
def test_derivative_matches_finite_difference(lam):
    phi = WavePacket.from_hermite([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, -0.5, 0.0], [0.0, 0.3, 0.2, 0.0])
    h = 1e-4
    central = (entropy_at(phi, lam + h) - entropy_at(phi, lam - h)) / (2 * h)
    assert central == pytest.approx(entropy_derivative_at(phi, lam), abs=1e-6)


@pytest.mark.parametrize("seed", range(3))
def test_random_packets_are_convex(seed):
    phi = random_packet(make_rng(seed, 5), "kinked" if seed % 2 else "smooth")
    profile = entropy_profile(phi, np.linspace(-0.5, 3.5, 41))
    assert profile.convexity_report == []


def test_entropy_form_diagonal(tent):
    assert entropy_form(tent, tent, 0.5) == pytest.approx(entropy_at(tent, 0.5), abs=1e-12)


def test_generator_form_is_symmetric_bilinear(tent):
    other = WavePacket.tent(0.5, 1.0, 3.0)
    both = WavePacket.piecewise_linear([0.0, 0.5, 1.0, 2.0, 3.0], [0.0, 0.5, 2.0, 0.5, 0.0])
    lam = 0.25
    cross = modular_generator_form(tent, other, lam)
    assert cross == pytest.approx(modular_generator_form(other, tent, lam), abs=1e-12)
    assert modular_generator_form(tent, tent, 3.0) == 0.0
    assert modular_generator_form(tent, tent, 0.0) == pytest.approx(2 * math.pi, abs=1e-12)
    polar = entropy_at(both, lam) - entropy_at(tent, lam) - entropy_at(other, lam)
    assert polar == pytest.approx(2 * cross, abs=1e-10)


def test_generator_form_diagonal_and_left_support(tent):
    bump = WavePacket.bump(center=2.0, radius=1.0)
    for lam in (0.0, 1.2, 2.5):
        assert modular_generator_form(bump, bump, lam) == pytest.approx(entropy_at(bump, lam), abs=1e-12)
    assert modular_generator_form(tent, bump, 2.0) == 0.0
    assert modular_generator_form(bump, tent, 2.0) == 0.0


def test_group_laws(tent):
    s, t = 0.3, 0.7
    assert packet_distance(dilate(translate(tent, t), s), translate(dilate(tent, s), math.exp(-s) * t)) < 1e-12
    assert packet_distance(translate(translate(tent, s), t), translate(tent, s + t)) < 1e-12
    assert packet_distance(reflect(reflect(tent)), tent) < 1e-12
    assert max(reflection_check(tent, t).values()) < 1e-12


def test_modular_flow_preserves_entropy_at_origin(tent):
    assert entropy_at(modular_flow(tent, 0.3), 0.0) == pytest.approx(entropy_at(tent, 0.0), rel=1e-12)


def test_inclusion_bookkeeping(tent):
    checks = inclusion_check(tent, 0.5)
    assert all(checks.values())


def test_spectral_norm_of_tent(tent):
    samples = spectral_embed(tent)
    assert samples.norm_squared() == pytest.approx(2 * math.log(2) / math.pi, rel=1e-3)
    assert samples.generator_expectation() > 0.0


def test_symplectic_form_spectral_agrees(tent):
    shifted = translate(tent, 0.5)
    position = symplectic_form(tent, shifted)
    assert position != 0.0
    assert symplectic_form_spectral(tent, shifted) == pytest.approx(position, abs=1e-3)


def test_translation_generator(tent):
    report = translation_generator_check(tent, s=0.1, t=0.7)
    assert report.passed
    assert report.generator_expectation > 0.0


def test_cross_check_lower_bounds(tent):
    family = [tent, translate(tent, 0.5)]
    report = discretized_cross_check(tent, 0.0, family, sizes=[1, 2])
    assert report.upper == pytest.approx(2 * math.pi)
    assert report.sizes[0] == 1
    # a single real direction spans an abelian subspace
    assert report.lower_bounds[0] == pytest.approx(0.0, abs=1e-8)
    assert report.bounded
    assert report.monotone


def test_cross_check_rejects_family_left_of_lambda(tent):
    with pytest.raises(ValueError):
        discretized_cross_check(tent, 0.5, [tent])

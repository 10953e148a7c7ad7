import math

import numpy as np
import pytest

from core.errors import DifferentSpheres, EmptySample, OutsideChart, RootNotBracketed
from core.geometry import (
    _chronological,
    MINKOWSKI_TRANSLATION,
    BumpProfile,
    CausalRelation,
    ConstantProfile,
    KillingFlowChart,
    KruskalPoint,
    MinkowskiPoint,
    QuadraticProfile,
    SphereBump,
    achronality_check,
    boost_flow,
    causal_convexity_check,
    causal_relation,
    deformed_wedge_membership,
    deformed_wedge_region,
    forward_light_cone_region,
    half_invariance_check,
    kruskal_flow,
    null_coordinates,
    profile_from_descriptor,
    sample_region,
    schwarzschild_radius,
    strip_equivalence_check,
    strip_membership,
    strip_orbit_parameter,
    strip_surface_membership,
    translated_wedge_region,
    wedge_hull_check,
    wedge_membership,
    wedge_region,
)

KRUSKAL = KillingFlowChart("kruskal_time", 1.0)


def test_schwarzschild_radius():
    assert schwarzschild_radius(0.0, 1.0, 1.0) == pytest.approx(2.5569290855221476, rel=1e-12)
    assert KruskalPoint(0.0, 0.0).r == pytest.approx(2.0, rel=1e-12)


def test_kruskal_chart_bounds():
    with pytest.raises(OutsideChart):
        KruskalPoint(2.0, 0.0)
    with pytest.raises(OutsideChart):
        schwarzschild_radius(2.0, 0.0)


def test_boost_scales_null_coordinates():
    p = MinkowskiPoint(0.5, 2.0, 0.3, -0.1)
    q = boost_flow(0.7, p)
    v, w, y = null_coordinates(p.as_array())
    v2, w2, y2 = null_coordinates(q.as_array())
    assert v2 == pytest.approx(math.exp(0.7) * v)
    assert w2 == pytest.approx(math.exp(-0.7) * w)
    np.testing.assert_array_equal(y, y2)


def test_kruskal_flow_preserves_radius():
    p = KruskalPoint(0.3, 1.2)
    q = kruskal_flow(2.0, 1.0, p)
    assert q.r == pytest.approx(p.r, rel=1e-12)
    # rapidity s/4M
    assert q.x + q.t == pytest.approx(math.exp(0.5) * (p.x + p.t))


def test_wedge_membership():
    assert wedge_membership(MinkowskiPoint(0.0, 1.0))
    assert not wedge_membership(MinkowskiPoint(1.0, 0.5))
    pts = np.array([[0.0, 1.0, 0.0, 0.0], [1.0, 0.5, 0.0, 0.0]])
    assert wedge_membership(pts).tolist() == [True, False]


def test_deformed_wedge_matches_null_form():
    rng = np.random.default_rng(0)
    pts = rng.uniform(-4.0, 4.0, size=(500, 4))
    f = QuadraticProfile(0.25)
    v, w, y = null_coordinates(pts)
    expected = (w > 0) & (v > 2 * f(y))
    np.testing.assert_array_equal(deformed_wedge_membership(f, pts), expected)


def test_strip_orbit_parameter():
    f = ConstantProfile(0.0)
    assert strip_orbit_parameter(f, 1.0, (0.0, 3.0, 0.0, 0.0)) == pytest.approx(math.log(1.5), abs=1e-10)
    assert strip_membership(f, 1.0, (0.0, 3.0, 0.0, 0.0))
    assert not strip_membership(f, 1.0, (0.0, 1.5, 0.0, 0.0))
    with pytest.raises(RootNotBracketed):
        strip_orbit_parameter(f, 1.0, (0.0, 1.5, 0.0, 0.0))


def test_strip_surface_membership():
    f = ConstantProfile(0.0)
    assert strip_surface_membership(f, 1.0, (0.0, 2.0, 0.0, 0.0))
    assert not strip_surface_membership(f, 1.0, (0.0, 2.5, 0.0, 0.0))


def test_causal_relations():
    origin = (0.0, 0.0, 0.0, 0.0)
    assert causal_relation(origin, (1.0, 0.0, 0.0, 0.0)) is CausalRelation.TIMELIKE_FUTURE
    assert causal_relation(origin, (1.0, 1.0, 0.0, 0.0)) is CausalRelation.NULL_FUTURE
    assert causal_relation(origin, (0.0, 1.0, 0.0, 0.0)) is CausalRelation.SPACELIKE
    assert causal_relation(origin, (-2.0, 1.0, 0.0, 0.0)) is CausalRelation.TIMELIKE_PAST
    forward = causal_relation(origin, (1.0, 0.5, 0.0, 0.0))
    assert causal_relation((1.0, 0.5, 0.0, 0.0), origin) is forward.reverse()


def test_coincident_and_equal_time_relations():
    p = (0.3, -1.2, 0.5, 0.0)
    assert causal_relation(p, p) is CausalRelation.COINCIDENT
    assert CausalRelation.COINCIDENT.reverse() is CausalRelation.COINCIDENT
    assert causal_relation(p, (0.3, -1.2, 0.5, 1e-3)) is CausalRelation.SPACELIKE
    assert causal_relation((0.0, 0.0, 0.0, 0.0), (0.0, 1e-6, 0.0, 0.0)) is CausalRelation.SPACELIKE


def test_kruskal_relations_need_same_sphere():
    p = KruskalPoint(0.0, 1.0).as_array()
    q = KruskalPoint(0.5, 1.0, (1.0, 0.0, 0.0)).as_array()
    with pytest.raises(DifferentSpheres):
        causal_relation(p, q, KRUSKAL)


def test_profile_descriptors():
    bump = profile_from_descriptor({"type": "bump", "height": 2.0, "radius": 1.0})
    assert isinstance(bump, BumpProfile)
    assert isinstance(profile_from_descriptor(None), ConstantProfile)
    cap = profile_from_descriptor({"type": "sphere_bump", "axis": [0.0, 0.0, 1.0]})
    assert isinstance(cap, SphereBump)
    with pytest.raises(ValueError):
        profile_from_descriptor({"type": "spiral"})


def test_sampling_is_independent_of_worker_count():
    region = deformed_wedge_region(BumpProfile(1.0, 1.0), 0.5)
    serial = sample_region(region, 3000, seed=11, chunk=256, workers=1)
    parallel = sample_region(region, 3000, seed=11, chunk=256, workers=3)
    np.testing.assert_array_equal(serial, parallel)
    assert region(serial).all()


def test_empty_region_raises():
    far = translated_wedge_region((0.0, 100.0))
    with pytest.raises(EmptySample):
        sample_region(far, 10, seed=1, chunk=64, workers=1, max_chunks=2)


@pytest.mark.parametrize(
    "region",
    [
        wedge_region(),
        deformed_wedge_region(QuadraticProfile(0.25), 0.5),
        translated_wedge_region((1.0, 1.0)),
        wedge_region(KRUSKAL),
        deformed_wedge_region(SphereBump(0.5, 1.0, (0.0, 0.0, 1.0)), 1.0, KRUSKAL, omega=(0.0, 0.0, 1.0)),
    ],
    ids=["wedge", "deformed", "lightlike", "kruskal_wedge", "kruskal_deformed"],
)
def test_half_invariance(region):
    report = half_invariance_check(region, n_samples=2000, seed=3, workers=1)
    assert report.samples == 2000
    assert report.violations == 0


def test_light_cone_invariant_under_time_translation():
    report = half_invariance_check(
        forward_light_cone_region(), n_samples=2000, seed=4, flow=MINKOWSKI_TRANSLATION, workers=1
    )
    assert report.violations == 0


def test_past_directed_flow_is_a_negative_control():
    region = deformed_wedge_region(BumpProfile(3.0, 2.0), 0.0)
    report = half_invariance_check(region, n_samples=2000, s_grid=(-0.5, -1.0), seed=5, workers=1)
    assert report.violations > 0
    assert len(report.examples) <= 10


@pytest.mark.parametrize(
    "region",
    [wedge_region(), translated_wedge_region((1.0, 1.0)), translated_wedge_region((-0.5, 0.5))],
    ids=["wedge", "lightlike_shift", "past_lightlike_shift"],
)
def test_wedges_are_causally_convex(region):
    report = causal_convexity_check(region, n_samples=2000, seed=6, workers=1)
    assert report.checked > 0
    assert report.violations == 0


def test_curved_deformation_is_not_causally_convex():
    region = deformed_wedge_region(QuadraticProfile(0.25), 0.5)
    report = causal_convexity_check(region, n_samples=500, seed=5, workers=1)
    assert report.violations > 0
    assert report.name == "causal_convexity:deformed_wedge"


def test_wedge_hull():
    assert wedge_hull_check(n_samples=500, seed=7, workers=1).violations == 0


def test_strip_equivalence():
    report = strip_equivalence_check(QuadraticProfile(0.25), 0.5, n_samples=300, seed=8, workers=1)
    assert report.violations == 0


@pytest.mark.parametrize(
    "f,lam",
    [(BumpProfile(1.0, 1.0), 1.0), (QuadraticProfile(0.25), 0.5), (ConstantProfile(0.3), -0.7), (BumpProfile(2.0, 0.5), 3.0)],
)
def test_same_transverse_surface_is_achronal(f, lam):
    assert achronality_check(f, lam, n_pairs=2000, seed=9).violations == 0


def test_null_generator_pairs_are_not_timelike():
    # both points rebuilt from lightcone data on v = 2, so dv rounds to about 4e-16
    v, w1, w2 = 2.0, 0.3, 7.9
    p = np.array([0.5 * (v - w1), 0.5 * (v + w1), 0.0, 0.0])
    q = np.array([0.5 * (v - w2), 0.5 * (v + w2), 0.0, 0.0])
    assert not _chronological(p, q)
    assert not _chronological(q, p)
    assert _chronological(q, p + np.array([1e-3, 0.0, 0.0, 0.0]))


def test_report_serialisation():
    report = half_invariance_check(wedge_region(), n_samples=100, seed=10, workers=1)
    payload = report.to_dict()
    assert payload["name"] == "half_invariance:wedge"
    assert payload["seed"] == 10
    assert payload["checked"] == 300

import math
import random

import pytest

from monodraw import geometry as geo
from monodraw.errors import UsageError


@pytest.mark.parametrize("x, y, want", [
    ((1, 0), (0, 1), math.pi / 2),
    ((1, 0), (1, 0), 0.0),
    ((1, 0), (-1, 1), 3 * math.pi / 4),
])
def test_angle_between_examples(x, y, want):
    assert geo.angle_between(x, y) == pytest.approx(want, abs=1e-15)


def test_angle_between_rejects_zero_vector():
    with pytest.raises(UsageError):
        geo.angle_between((0.0, 0.0), (1.0, 0.0))


def test_angle_between_matches_arccos_and_is_symmetric():
    rnd = random.Random(1)
    for _ in range(1000):
        x = (rnd.uniform(-1, 1), rnd.uniform(-1, 1))
        y = (rnd.uniform(-1, 1), rnd.uniform(-1, 1))
        z = (rnd.uniform(-1, 1), rnd.uniform(-1, 1))
        c = geo.dot(x, y) / (geo.norm(x) * geo.norm(y))
        assert geo.angle_between(x, y) == pytest.approx(math.acos(max(-1.0, min(1.0, c))), abs=1e-7)
        assert geo.angle_between(x, y) == geo.angle_between(y, x)
        assert geo.angle_between(x, z) <= geo.angle_between(x, y) + geo.angle_between(y, z) + 1e-12


def test_angle_between_keeps_accuracy_near_zero():
    assert geo.angle_between((1.0, 0.0), (1.0, 1e-12)) == pytest.approx(1e-12, rel=1e-9)


@pytest.mark.parametrize("x, d, want", [((1, 1), (1, 0), True), ((0, 1), (1, 0), False), ((-1, 1), (1, 0), False)])
def test_is_monotone_wrt_examples(x, d, want):
    assert geo.is_monotone_wrt(x, d) is want


def test_is_monotone_wrt_agrees_with_angle():
    rnd = random.Random(2)
    for _ in range(1000):
        x = (rnd.uniform(-1, 1), rnd.uniform(-1, 1))
        d = (rnd.uniform(-1, 1), rnd.uniform(-1, 1))
        if abs(geo.dot(x, d)) < 1e-9:
            continue
        assert geo.is_monotone_wrt(x, d) == (geo.angle_between(x, d) < math.pi / 2)
    # exactly orthogonal pairs are excluded
    for a, b in [(3.0, 7.0), (-2.5, 0.5), (1e-3, 4.0)]:
        assert not geo.is_monotone_wrt((a, b), (-b, a))


def test_cone_intersect_disk_slices():
    disk = geo.Circle((0.0, 0.0), 1.0)
    full = geo.cone_intersect_disk(geo.Cone((0.0, 0.0), (1.0, 0.0), (1.0, 0.0)), disk)
    assert full.radius == 1.0 and full.sweep == pytest.approx(2 * math.pi)
    half = geo.cone_intersect_disk(geo.Cone((0.0, 0.0), (1.0, 0.0), (-1.0, 0.0)), disk)
    assert half.sweep == pytest.approx(math.pi)
    assert half.contains((0.0, 0.5)) and not half.contains((0.0, -0.5))
    third = geo.cone_intersect_disk(geo.Cone((0.0, 0.0), (1.0, 0.0), geo.polar(1, math.pi / 3)),
                                    geo.Circle((0.0, 0.0), 2.0))
    assert third.radius == 2.0 and third.sweep == pytest.approx(math.pi / 3)


def test_cone_intersect_disk_needs_common_apex():
    with pytest.raises(UsageError):
        geo.cone_intersect_disk(geo.Cone((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)), geo.Circle((1.0, 0.0), 1.0))


def test_max_disk_radius_in_cone_examples():
    cone = geo.Cone((0.0, 0.0), (1.0, -1.0), (1.0, 1.0))
    assert geo.max_disk_radius_in_cone((1.0, 0.0), cone) == pytest.approx(1 / math.sqrt(2))
    assert geo.max_disk_radius_in_cone((1.0, 1.0), cone) == 0.0
    assert geo.max_disk_radius_in_cone((-1.0, 0.0), cone) == 0.0


def _disk_inside(p, r, cone, samples):
    return all(cone.contains(geo.add(p, geo.polar(r * math.sqrt(s), t))) for s, t in samples)


def test_max_disk_radius_in_cone_sampling_oracle():
    rnd = random.Random(3)
    checked = 0
    while checked < 30:
        lo = geo.polar(1.0, rnd.uniform(0, 2 * math.pi))
        hi = geo.polar(1.0, rnd.uniform(0, 2 * math.pi))
        cone = geo.Cone((rnd.uniform(-1, 1), rnd.uniform(-1, 1)), lo, hi)
        p = (rnd.uniform(-2, 2), rnd.uniform(-2, 2))
        r = geo.max_disk_radius_in_cone(p, cone)
        if r == 0.0:
            continue
        checked += 1
        inner = [(rnd.random(), rnd.uniform(0, 2 * math.pi)) for _ in range(10000)]
        assert _disk_inside(p, 0.999 * r, cone, inner)
        ring = [(1.0, 2 * math.pi * j / 20000) for j in range(20000)]
        assert not _disk_inside(p, 1.001 * r, cone, ring)


@pytest.mark.parametrize("seg1, seg2, want", [
    (((0, 0), (2, 2)), ((0, 2), (2, 0)), True),
    (((0, 0), (1, 0)), ((2, 0), (3, 0)), False),
    (((0, 0), (1, 0)), ((1, 0), (1, 1)), False),
    (((0, 0), (2, 0)), ((1, 0), (1, 1)), True),
    (((0, 0), (2, 0)), ((1, 0), (3, 0)), True),
])
def test_segments_intersect_examples(seg1, seg2, want):
    assert geo.segments_intersect(*seg1, *seg2) is want


def test_segments_intersect_rejects_zero_length():
    with pytest.raises(UsageError):
        geo.segments_intersect((0, 0), (0, 0), (1, 0), (2, 0))


def test_orientation_is_exact_on_near_collinear_points():
    a, b = (0.5, 0.5), (12.0, 12.0)
    c = (24.0, 24.000000000000004)
    assert geo.orientation(a, b, c) == 1
    assert geo.orientation(a, b, (24.0, 24.0)) == 0
    assert geo.orientation(a, c, b) == -1


def test_arc_spaced_points_are_symmetric():
    arc = geo.CircleArc((0.0, 0.0), 2.0, -0.3, 0.3)
    pts = arc.spaced_points(3)
    assert pts[1] == pytest.approx((2.0, 0.0))
    assert pts[0][1] == pytest.approx(-pts[2][1])
    with pytest.raises(UsageError):
        geo.CircleArc((0.0, 0.0), 1.0, 0.0, 2 * math.pi)

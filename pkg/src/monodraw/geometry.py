"""Planar primitives and the angle / monotonicity predicates.

Points and vectors are plain ``(x, y)`` float tuples.  Everything here is
pure; the few dataclasses are frozen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

from .errors import UsageError

Point = Tuple[float, float]
Vec = Tuple[float, float]

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# default angular margin for strict monotonicity decisions (radians)
EPS_ANGLE = 1e-9

# Shewchuk's static filter for the 2x2 orientation determinant
_EPS = 2.0 ** -53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPS) * _EPS


def sub(a: Point, b: Point) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def add(a: Point, b: Vec) -> Point:
    return (a[0] + b[0], a[1] + b[1])


def scale(a: Vec, s: float) -> Vec:
    return (a[0] * s, a[1] * s)


def dot(a: Vec, b: Vec) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Vec, b: Vec) -> float:
    return a[0] * b[1] - a[1] * b[0]


def norm(a: Vec) -> float:
    return math.hypot(a[0], a[1])


def dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def perp(a: Vec) -> Vec:
    """Rotate by +90 degrees (counterclockwise)."""
    return (-a[1], a[0])


def unit(a: Vec) -> Vec:
    n = norm(a)
    if n == 0.0:
        raise UsageError("cannot normalize the zero vector")
    return (a[0] / n, a[1] / n)


def polar(r: float, theta: float) -> Vec:
    return (r * math.cos(theta), r * math.sin(theta))


def direction(v: Vec) -> float:
    """Polar angle of ``v`` in [0, 2pi)."""
    return math.atan2(v[1], v[0]) % TWO_PI


def _require_nonzero(*vs: Vec) -> None:
    for v in vs:
        if v[0] == 0.0 and v[1] == 0.0:
            raise UsageError("zero vector passed to an angle predicate")
        if not (math.isfinite(v[0]) and math.isfinite(v[1])):
            raise UsageError(f"non-finite vector {v!r}")


def angle_between(x: Vec, y: Vec) -> float:
    """Smallest angle between two nonzero vectors, in [0, pi].

    Equal to ``arccos(<x,y> / (|x||y|))``; evaluated through ``atan2`` so
    angles near 0 and pi keep full relative accuracy.
    """
    _require_nonzero(x, y)
    return math.atan2(abs(cross(x, y)), dot(x, y))


def is_monotone_wrt(x: Vec, d: Vec) -> bool:
    """True iff ``x`` makes an angle strictly below pi/2 with ``d``."""
    _require_nonzero(x, d)
    return dot(x, d) > 0.0


def slack(x: Vec, d: Vec) -> float:
    """pi/2 minus the angle between ``x`` and ``d`` (negative if not monotone)."""
    return HALF_PI - angle_between(x, d)


def ccw_angle(a: Vec, b: Vec) -> float:
    """Counterclockwise sweep from direction ``a`` to direction ``b`` in [0, 2pi)."""
    _require_nonzero(a, b)
    return math.atan2(cross(a, b), dot(a, b)) % TWO_PI


def in_ccw_order(a: Vec, b: Vec, c: Vec) -> bool:
    """Strict radial order: sweeping ccw from ``a`` one meets ``b`` before ``c``."""
    ab = ccw_angle(a, b)
    ac = ccw_angle(a, c)
    return 0.0 < ab < ac


# ---------------------------------------------------------------------------
# orientation and segments
# ---------------------------------------------------------------------------

def orient_det(a: Point, b: Point, c: Point) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def orientation(a: Point, b: Point, c: Point) -> int:
    """Exact sign of the turn a -> b -> c for float inputs.

    Returns +1 (left turn), -1 (right turn) or 0 (collinear).  A static error
    filter settles almost every call; the rest are evaluated in rationals.
    """
    detleft = (b[0] - a[0]) * (c[1] - a[1])
    detright = (b[1] - a[1]) * (c[0] - a[0])
    det = detleft - detright
    bound = _CCW_ERRBOUND * (abs(detleft) + abs(detright))
    if det > bound:
        return 1
    if det < -bound:
        return -1
    ax, ay = Fraction(a[0]), Fraction(a[1])
    exact = (Fraction(b[0]) - ax) * (Fraction(c[1]) - ay) - (Fraction(b[1]) - ay) * (Fraction(c[0]) - ax)
    return (exact > 0) - (exact < 0)


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    """For collinear p: does p lie in the closed bounding box of ab."""
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Do closed segments ab and cd meet anywhere other than a shared endpoint?

    A shared endpoint alone does not count; collinear overlap beyond a shared
    endpoint does.
    """
    if a == b or c == d:
        raise UsageError("degenerate zero-length segment")
    shared = {a, b} & {c, d}
    if len(shared) == 2:
        return True  # same segment
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if shared:
        (s,) = shared
        other_ab = b if a == s else a
        other_cd = d if c == s else c
        if orientation(s, other_ab, other_cd) != 0:
            return False
        # collinear through the shared endpoint: overlap iff same direction
        return dot(sub(other_ab, s), sub(other_cd, s)) > 0.0
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and _on_segment(a, b, c):
        return True
    if o2 == 0 and _on_segment(a, b, d):
        return True
    if o3 == 0 and _on_segment(c, d, a):
        return True
    if o4 == 0 and _on_segment(c, d, b):
        return True
    return False


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ab = sub(b, a)
    denom = dot(ab, ab)
    if denom == 0.0:
        return dist(p, a)
    t = max(0.0, min(1.0, dot(sub(p, a), ab) / denom))
    return dist(p, add(a, scale(ab, t)))


def point_ray_distance(p: Point, apex: Point, d: Vec) -> float:
    t = dot(sub(p, apex), d) / dot(d, d)
    if t <= 0.0:
        return dist(p, apex)
    return dist(p, add(apex, scale(d, t)))


def point_line_signed(p: Point, a: Point, b: Point) -> float:
    """Signed distance of p from the directed line a->b (positive = left)."""
    ab = sub(b, a)
    return cross(ab, sub(p, a)) / norm(ab)


# ---------------------------------------------------------------------------
# cones, circles, arcs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise UsageError(f"circle radius must be positive, got {self.radius}")

    def contains(self, p: Point) -> bool:
        """Open-disk membership."""
        return dist(p, self.center) < self.radius

    def boundary_point(self, theta: float) -> Point:
        return add(self.center, polar(self.radius, theta))


@dataclass(frozen=True)
class Cone:
    """Open wedge at ``apex`` swept counterclockwise from ``lo`` to ``hi``.

    Identical boundary directions denote the plane minus one ray.
    """

    apex: Point
    lo: Vec
    hi: Vec

    @property
    def sweep(self) -> float:
        s = ccw_angle(self.lo, self.hi)
        return TWO_PI if s == 0.0 else s

    def contains(self, p: Point) -> bool:
        v = sub(p, self.apex)
        if v == (0.0, 0.0):
            return False
        a = ccw_angle(self.lo, v)
        return 0.0 < a < self.sweep

    def contains_direction(self, v: Vec) -> bool:
        a = ccw_angle(self.lo, v)
        return 0.0 < a < self.sweep

    def bisector(self) -> Vec:
        return polar(1.0, direction(self.lo) + 0.5 * self.sweep)


@dataclass(frozen=True)
class CircleArc:
    center: Point
    radius: float
    start: float
    end: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise UsageError("arc radius must be positive")
        if not 0.0 < self.sweep < TWO_PI:
            raise UsageError("arc sweep must lie strictly between 0 and 2pi")

    @property
    def sweep(self) -> float:
        return self.end - self.start

    def point(self, theta: float) -> Point:
        return add(self.center, polar(self.radius, theta))

    def spaced_points(self, k: int) -> list:
        """k points, equal angular steps, symmetric about the arc midpoint."""
        if k == 1:
            return [self.point(0.5 * (self.start + self.end))]
        step = self.sweep / (k - 1)
        return [self.point(self.start + j * step) for j in range(k)]


@dataclass(frozen=True)
class Slice:
    """Open intersection of a cone with a disk centred at the cone apex."""

    apex: Point
    lo: Vec
    sweep: float
    radius: float

    @property
    def empty(self) -> bool:
        return self.sweep <= 0.0 or self.radius <= 0.0

    def contains(self, p: Point) -> bool:
        if self.empty:
            return False
        v = sub(p, self.apex)
        if v == (0.0, 0.0) or norm(v) >= self.radius:
            return False
        a = ccw_angle(self.lo, v)
        return 0.0 < a < self.sweep


def cone_intersect_disk(cone: Cone, disk: Circle) -> Slice:
    if cone.apex != disk.center:
        raise UsageError("cone apex and disk centre must coincide")
    return Slice(cone.apex, cone.lo, cone.sweep, disk.radius)


def max_disk_radius_in_cone(p: Point, cone: Cone) -> float:
    """Supremum radius of an open disk centred at p inside the open cone."""
    if not cone.contains(p):
        return 0.0
    return min(point_ray_distance(p, cone.apex, cone.lo),
               point_ray_distance(p, cone.apex, cone.hi))


# ---------------------------------------------------------------------------
# convex polygons
# ---------------------------------------------------------------------------

def convex_hull(points: Iterable[Point]) -> list:
    """Andrew's monotone chain; counterclockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and orient_det(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and orient_det(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _axes(poly: Sequence[Point]) -> list:
    if len(poly) == 1:
        return []
    out = []
    m = len(poly) if len(poly) > 2 else 1
    for i in range(m):
        e = sub(poly[(i + 1) % len(poly)], poly[i])
        if e != (0.0, 0.0):
            out.append(unit(perp(e)))
    return out


def convex_overlap_depth(P: Sequence[Point], Q: Sequence[Point]) -> float:
    """Minimum projection overlap of two convex point sets over SAT axes.

    A value <= 0 means a separating line exists (touching gives 0).  Points
    and segments are accepted as degenerate polygons.
    """
    axes = _axes(P) + _axes(Q)
    if not axes:
        return -dist(P[0], Q[0])
    best = math.inf
    for ax in axes:
        pp = [dot(ax, p) for p in P]
        qq = [dot(ax, q) for q in Q]
        overlap = min(max(pp), max(qq)) - max(min(pp), min(qq))
        best = min(best, overlap)
        if best < 0.0:
            break
    return best


def polygon_signed_area(poly: Sequence[Point]) -> float:
    s = 0.0
    for i in range(len(poly)):
        s += cross(poly[i], poly[(i + 1) % len(poly)])
    return 0.5 * s

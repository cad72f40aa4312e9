"""Strongly monotone drawings of 2-trees through drawings with bubbles.

A bubble is an open disk attached to an active edge (a, b): any point x in it
sees (a, b) at an obtuse angle, and the drawing stays strongly monotone
whichever points are stacked into whichever bubbles.  The builder replays a
stacking plan of the 2-tree.  Each step places the stacked vertices on a
short arc inside the bubble of their edge, then gives every new vertex w two
fresh bubbles just beyond w, one on the prolongation of each incident edge.

Strong monotonicity "with bubbles" is certified on a finite point set:
every bubble contributes its centre and 8 points on the circle of twice its
radius, all joined to the two endpoints of the bubble's edge.
"""

from __future__ import annotations

import heapq
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import geometry as geo
from .errors import InvariantError, PrecisionError
from .graph import Edge, Graph, StackingPlan, _norm_edge, two_tree_plan
from .verify import Drawing, widest_to_points

log = logging.getLogger(__name__)

# bubbles are stored at half the radius of the certified circle
CERT_FACTOR = 2.0
CERT_POINTS = 8
# sides of the polygon that stands in for a bubble in planarity checks
HULL_SIDES = 16
# parameter search stops below this fraction of the drawing diameter
RELATIVE_FLOOR = 1e-12
MAX_HALVINGS = 400
# factor applied to (r, epsilon) per search step
SHRINK = 0.5
# stacked vertices use this fraction of the arc that fits in the bubble
ARC_FILL = 0.9
# stacking plans tried before reporting a precision failure
MAX_BASE_TRIES = 16


@dataclass(frozen=True)
class Bubble:
    """Open disk for stacking onto ``edge``; ``pivot`` is the endpoint the stacking arc turns around."""

    edge: Edge
    circle: geo.Circle
    pivot: int

    @property
    def other(self) -> int:
        a, b = self.edge
        return b if self.pivot == a else a

    def certification_points(self) -> List[geo.Point]:
        c, r = self.circle.center, CERT_FACTOR * self.circle.radius
        ring = [geo.add(c, geo.polar(r, 2.0 * math.pi * j / CERT_POINTS)) for j in range(CERT_POINTS)]
        return [c] + ring

    def polygon(self) -> List[geo.Point]:
        """Regular polygon circumscribing the disk."""
        c, r = self.circle.center, self.circle.radius / math.cos(math.pi / HULL_SIDES)
        return [geo.add(c, geo.polar(r, 2.0 * math.pi * j / HULL_SIDES)) for j in range(HULL_SIDES)]


def is_obtuse_at(x: geo.Point, a: geo.Point, b: geo.Point) -> bool:
    """Angle a-x-b exceeds pi/2, i.e. x lies strictly inside the circle on diameter ab."""
    return geo.dot(geo.sub(a, x), geo.sub(b, x)) < 0.0


def inside_thales(circle: geo.Circle, a: geo.Point, b: geo.Point) -> bool:
    mid = geo.scale(geo.add(a, b), 0.5)
    return geo.dist(circle.center, mid) + circle.radius < 0.5 * geo.dist(a, b)


def sample_disk(circle: geo.Circle, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples from the open disk."""
    rad = circle.radius * np.sqrt(rng.random(count)) * (1.0 - 1e-12)
    ang = rng.random(count) * geo.TWO_PI
    return np.column_stack([circle.center[0] + rad * np.cos(ang), circle.center[1] + rad * np.sin(ang)])


def obtusity_violations(circle: geo.Circle, a: geo.Point, b: geo.Point, count: int = 1000,
                        rng: Optional[np.random.Generator] = None) -> int:
    rng = rng or np.random.default_rng(0)
    pts = sample_disk(circle, count, rng)
    va = np.asarray(a) - pts
    vb = np.asarray(b) - pts
    return int(np.count_nonzero(np.einsum("ij,ij->i", va, vb) >= 0.0))


@dataclass
class BubbledDrawing:
    """Partial drawing plus one bubble per active edge.

    ``alpha`` is the smallest best-path slack seen over all certified pairs;
    it only ever decreases.  ``created`` keeps every bubble ever attached,
    with the endpoint positions it was built for.
    """

    pos: Dict[int, geo.Point] = field(default_factory=dict)
    edges: List[Edge] = field(default_factory=list)
    bubbles: Dict[Edge, Bubble] = field(default_factory=dict)
    alpha: float = geo.HALF_PI
    alpha_history: List[float] = field(default_factory=list)
    created: List[Bubble] = field(default_factory=list)

    @property
    def vertices(self) -> List[int]:
        return sorted(self.pos)

    def drawing(self) -> Drawing:
        """Drawing of the placed vertices, relabelled 0..k-1 in id order."""
        vs = self.vertices
        idx = {v: i for i, v in enumerate(vs)}
        g = Graph.from_edges([(idx[a], idx[b]) for a, b in self.edges], n=len(vs))
        return Drawing(g, [self.pos[v] for v in vs])

    def diameter(self) -> float:
        pts = np.array(list(self.pos.values()))
        return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))

    def lower_alpha(self, value: float) -> None:
        self.alpha = min(self.alpha, value)
        self.alpha_history.append(self.alpha)

    def to_json(self) -> str:
        """Debug dump of the vertices, edges and bubbles."""
        doc = {
            "vertices": [{"id": v, "x": self.pos[v][0], "y": self.pos[v][1]} for v in self.vertices],
            "edges": [list(e) for e in self.edges],
            "bubbles": [{"edge": list(e), "center": list(b.circle.center), "r": b.circle.radius}
                        for e, b in sorted(self.bubbles.items())],
            "alpha": self.alpha,
        }
        return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

def _targets(state: BubbledDrawing, idx: Dict[int, int], skip: Optional[Edge] = None):
    pts, attach = [], []
    for v, i in idx.items():
        pts.append(state.pos[v])
        attach.append([i])
    for e, b in sorted(state.bubbles.items()):
        if e == skip:
            continue
        for p in b.certification_points():
            pts.append(p)
            attach.append([idx[e[0]], idx[e[1]]])
    return np.array(pts, dtype=float), attach


def certify(state: BubbledDrawing, sources: Sequence[Tuple[geo.Point, Sequence[int], Optional[Edge]]],
            eps: float = geo.EPS_ANGLE) -> Optional[float]:
    """Smallest best-path slack from each source to every certified point.

    A source is ``(point, attached vertex ids, own bubble edge or None)``;
    a placed vertex is given with its own position and ``[v]``.  Points of the
    source's own bubble are not targets (one vertex per bubble).  Returns
    None when some pair has no strongly monotone route.
    """
    vs = state.vertices
    idx = {v: i for i, v in enumerate(vs)}
    pos = np.array([state.pos[v] for v in vs], dtype=float)
    darts = np.array([(idx[a], idx[b]) for a, b in state.edges] + [(idx[b], idx[a]) for a, b in state.edges],
                     dtype=int).reshape(-1, 2)
    worst = math.inf
    for point, attach, own in sources:
        targets, t_attach = _targets(state, idx, skip=own)
        vals = widest_to_points(pos, darts, point, [idx[a] for a in attach], targets, t_attach, eps)
        same = np.all(targets == np.asarray(point, dtype=float), axis=1)
        vals = vals[~same]
        if vals.size == 0:
            continue
        if np.any(vals == -np.inf):
            return None
        worst = min(worst, float(vals.min()))
    return worst


# ---------------------------------------------------------------------------
# planarity of every extension
# ---------------------------------------------------------------------------

def _wedge(hull: Sequence[geo.Point], s: geo.Point) -> Tuple[float, float]:
    """Start direction and sweep of the interior angle of a ccw convex polygon at vertex s."""
    i = hull.index(s)
    nxt = geo.sub(hull[(i + 1) % len(hull)], s)
    prv = geo.sub(hull[i - 1], s)
    return geo.direction(nxt), geo.ccw_angle(nxt, prv)


def _wedges_disjoint(w1: Tuple[float, float], w2: Tuple[float, float]) -> bool:
    (lo1, s1), (lo2, s2) = w1, w2
    return (lo2 - lo1) % geo.TWO_PI >= s1 and (lo1 - lo2) % geo.TWO_PI >= s2


def _direction_outside(wedge: Tuple[float, float], d: geo.Vec) -> bool:
    lo, sweep = wedge
    a = (geo.direction(d) - lo) % geo.TWO_PI
    return not 0.0 < a < sweep


def _region(state: BubbledDrawing, b: Bubble) -> List[geo.Point]:
    a, c = b.edge
    return geo.convex_hull([state.pos[a], state.pos[c]] + b.polygon())


def region_is_free(state: BubbledDrawing, b: Bubble, extra: Sequence[Bubble] = ()) -> bool:
    """Everything stacked into ``b`` stays clear of the drawing and of other bubbles' regions.

    The region swept by the edges of a stacked vertex lies in the hull of
    the edge and the bubble; it must lie strictly on one side of the edge,
    contain no vertex, meet no edge except at the shared endpoints and be
    interior-disjoint from the region of every other bubble.
    """
    ea, eb = b.edge
    pa, pb = state.pos[ea], state.pos[eb]
    poly = b.polygon()
    side = geo.orientation(pa, pb, b.circle.center)
    if side == 0 or any(geo.orientation(pa, pb, p) != side for p in poly):
        return False
    hull = geo.convex_hull([pa, pb] + poly)
    if pa not in hull or pb not in hull:
        return False
    wedge = {ea: _wedge(hull, pa), eb: _wedge(hull, pb)}
    for v, p in state.pos.items():
        if v not in wedge and geo.convex_overlap_depth([p], hull) >= 0.0:
            return False
    for x, y in state.edges:
        shared = {x, y} & {ea, eb}
        if len(shared) == 2:
            continue
        if shared:
            s = shared.pop()
            t = y if s == x else x
            if not _direction_outside(wedge[s], geo.sub(state.pos[t], state.pos[s])):
                return False
        elif geo.convex_overlap_depth([state.pos[x], state.pos[y]], hull) >= 0.0:
            return False
    for other in list(state.bubbles.values()) + list(extra):
        if other.edge == b.edge:
            continue
        ohull = _region(state, other)
        shared = set(other.edge) & {ea, eb}
        if shared:
            s = state.pos[shared.pop()]
            if not _wedges_disjoint(_wedge(hull, s), _wedge(ohull, s)):
                return False
        elif geo.convex_overlap_depth(hull, ohull) >= 0.0:
            return False
    return True


def clearance(state: BubbledDrawing, w: int) -> float:
    """Distance from w to every edge and bubble region not touching w."""
    p = state.pos[w]
    best = math.inf
    for x, y in state.edges:
        if w not in (x, y):
            best = min(best, geo.point_segment_distance(p, state.pos[x], state.pos[y]))
    for b in state.bubbles.values():
        if w in b.edge:
            continue
        hull = _region(state, b)
        for i in range(len(hull)):
            best = min(best, geo.point_segment_distance(p, hull[i], hull[(i + 1) % len(hull)]))
    return best


# ---------------------------------------------------------------------------
# construction steps
# ---------------------------------------------------------------------------

def initial_state(base: Edge) -> BubbledDrawing:
    """Unit edge at the origin; its bubble sits above the midpoint, well inside the Thales circle."""
    a, b = base
    state = BubbledDrawing(pos={a: (0.0, 0.0), b: (1.0, 0.0)}, edges=[_norm_edge(a, b)])
    bub = Bubble(_norm_edge(a, b), geo.Circle((0.5, 0.25), 0.25 / CERT_FACTOR), a)
    state.bubbles[bub.edge] = bub
    state.created.append(bub)
    value = certify(state, [(p, bub.edge, bub.edge) for p in bub.certification_points()])
    if value is None:
        raise InvariantError("initial bubble fails certification")
    state.lower_alpha(value)
    return state


def arc_positions(state: BubbledDrawing, bub: Bubble, k: int, fill: float = ARC_FILL) -> List[geo.Point]:
    """k points on the arc around the pivot through the bubble centre, inside the bubble."""
    p = state.pos[bub.pivot]
    c, r = bub.circle.center, bub.circle.radius
    rho = geo.dist(p, c)
    theta = geo.direction(geo.sub(c, p))
    # half-angle of the part of the arc inside the disk
    half = 2.0 * math.asin(min(1.0, r / (2.0 * rho)))
    h = fill * half
    arc = geo.CircleArc(p, rho, theta - h, theta + h)
    return arc.spaced_points(k)


def stack_into_bubble(state: BubbledDrawing, e: Edge, new: Sequence[int],
                      eps: float = geo.EPS_ANGLE) -> List[int]:
    """Place the vertices ``new`` on an arc inside the bubble of e, then drop the bubble."""
    e = _norm_edge(*e)
    bub = state.bubbles.get(e)
    if bub is None:
        raise InvariantError(f"edge {e} has no bubble")
    if not new:
        del state.bubbles[e]
        return []
    pa, pb = state.pos[e[0]], state.pos[e[1]]
    fill = ARC_FILL
    for _ in range(MAX_HALVINGS):
        pts = arc_positions(state, bub, len(new), fill)
        if len(set(pts)) == len(pts) and all(bub.circle.contains(q) and is_obtuse_at(q, pa, pb) for q in pts):
            trial = BubbledDrawing(dict(state.pos), list(state.edges),
                                   {k: v for k, v in state.bubbles.items() if k != e})
            for w, q in zip(new, pts):
                trial.pos[w] = q
                trial.edges += [_norm_edge(e[0], w), _norm_edge(e[1], w)]
            value = certify(trial, [(trial.pos[w], [w], None) for w in new], eps)
            if value is not None:
                state.pos, state.edges = trial.pos, trial.edges
                del state.bubbles[e]
                state.lower_alpha(value)
                return list(new)
        fill *= 0.5
    raise PrecisionError(f"could not stack {len(new)} vertices into the bubble of {e}")


def _beta_edge(pu: geo.Point, pw: geo.Point, c: geo.Point, r: float) -> float:
    """Angle at u covering both w and the whole disk (c, r)."""
    d = geo.dist(pu, c)
    if d <= r:
        return math.inf
    return geo.angle_between(geo.sub(c, pu), geo.sub(pw, pu)) + math.asin(r / d)


def bubble_angles(state: BubbledDrawing, w: int, e1: Edge, e2: Edge, eps_dist: float, r: float
                 ) -> Tuple[geo.Circle, geo.Circle, Dict[str, Tuple[float, float]]]:
    """Candidate disks for e1 = (u, w) and e2 = (v, w) and their safety angles.

    B1 is centred on the prolongation of e2 beyond w, B2 on that of e1.
    Each entry holds the value for B1 and for B2: ``beta1`` is the angle at
    u swept by w and B1 (at v for B2), ``beta2`` the angle at w between the
    prolongation and a tangent of the disk, ``beta_y`` the worst angle at a
    certified point y between w and the disk.
    """
    u = e1[0] if e1[1] == w else e1[1]
    v = e2[0] if e2[1] == w else e2[1]
    pu, pv, pw = state.pos[u], state.pos[v], state.pos[w]
    c1 = geo.add(pw, geo.scale(geo.unit(geo.sub(pw, pv)), eps_dist))
    c2 = geo.add(pw, geo.scale(geo.unit(geo.sub(pw, pu)), eps_dist))
    beta2 = math.asin(min(1.0, r / eps_dist))
    ys = [state.pos[y] for y in state.pos if y != w]
    for bub in state.bubbles.values():
        ys += bub.certification_points()
    beta_y = tuple(max((_beta_edge(y, pw, c, r) for y in ys), default=0.0) for c in (c1, c2))
    angles = {
        "beta1": (_beta_edge(pu, pw, c1, r), _beta_edge(pv, pw, c2, r)),
        "beta2": (beta2, beta2),
        "beta_y": beta_y,
    }
    return geo.Circle(c1, r), geo.Circle(c2, r), angles


def make_bubbles(state: BubbledDrawing, w: int, e1: Edge, e2: Edge, eps: float = geo.EPS_ANGLE,
                 wanted: Tuple[bool, bool] = (True, True)) -> List[Bubble]:
    """Attach bubbles to the two edges of the degree-2 vertex w.

    Search over (r, epsilon): start from epsilon = 1/8 of the shorter edge
    and the clearance around w, r = epsilon / 8, halve r alone while only
    the ratio condition fails and halve both otherwise.  ``wanted`` masks
    edges that will never receive a vertex; they are deactivated at once.
    """
    e1, e2 = _norm_edge(*e1), _norm_edge(*e2)
    u = e1[0] if e1[1] == w else e1[1]
    v = e2[0] if e2[1] == w else e2[1]
    pu, pv, pw = state.pos[u], state.pos[v], state.pos[w]
    if not is_obtuse_at(pw, pu, pv):
        raise InvariantError(f"angle at {w} is not obtuse")
    sides = [i for i in range(2) if wanted[i]]
    if not sides:
        return []
    ends = ((pu, e1), (pv, e2))
    eps_dist = 0.125 * min([geo.dist(pu, pw), geo.dist(pv, pw), clearance(state, w)])
    r = 0.125 * eps_dist
    floor = RELATIVE_FLOOR * state.diameter()
    budget = 0.25 * state.alpha
    for _ in range(MAX_HALVINGS):
        if r < floor:
            break
        d1, d2, beta = bubble_angles(state, w, e1, e2, eps_dist, r)
        if beta["beta2"][0] >= budget:
            r *= SHRINK
            continue
        disks = (d1, d2)
        new = [Bubble(ends[i][1], disks[i], w) for i in sides]
        ok = all(beta["beta1"][i] < budget and beta["beta_y"][i] < budget for i in sides)
        ok = ok and all(inside_thales(disks[i], ends[i][0], pw) for i in sides)
        ok = ok and all(region_is_free(state, b, [o for o in new if o is not b]) for b in new)
        if ok:
            for b in new:
                state.bubbles[b.edge] = b
            value = certify(state, [(p, b.edge, b.edge) for b in new for p in b.certification_points()], eps)
            if value is not None:
                state.created += new
                state.lower_alpha(value)
                return new
            for b in new:
                del state.bubbles[b.edge]
        eps_dist *= SHRINK
        r *= SHRINK
    raise PrecisionError(f"no admissible bubbles at vertex {w} above the precision floor")


def reroute_witness(path_yw: Sequence[int], e1: Edge, x: int) -> List[int]:
    """Path to a point x stacked onto e1 = (u, w), from a path ending at w.

    If the path arrives through e1 its last edge is bent to x, otherwise
    the edge (w, x) is appended.
    """
    w = path_yw[-1]
    if w not in e1:
        raise InvariantError(f"path does not end at an endpoint of {e1}")
    u = e1[0] if e1[1] == w else e1[1]
    if len(path_yw) >= 2 and path_yw[-2] == u:
        return list(path_yw[:-1]) + [x]
    return list(path_yw) + [x]


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def build(plan: StackingPlan, eps: float = geo.EPS_ANGLE,
          on_step: Optional[Callable[[BubbledDrawing, str], None]] = None) -> BubbledDrawing:
    used = {e for e, stacked in plan.steps if stacked}
    state = initial_state(plan.base_edge)
    if on_step:
        on_step(state, "start")
    for e, stacked in plan.steps:
        if e not in state.bubbles:
            continue
        stack_into_bubble(state, e, stacked, eps)
        if on_step:
            on_step(state, f"stack {e}")
        for w in stacked:
            e1, e2 = _norm_edge(e[0], w), _norm_edge(e[1], w)
            make_bubbles(state, w, e1, e2, eps, (e1 in used, e2 in used))
            if on_step:
                on_step(state, f"bubbles {w}")
    return state


def plan_depth(plan: StackingPlan) -> Tuple[int, int]:
    """Longest chain of nested stacking steps, and how many vertices reach it."""
    level = {plan.base_edge: 0}
    depths = []
    for e, stacked in plan.steps:
        for w in stacked:
            d = level[e] + 1
            depths.append(d)
            level[_norm_edge(e[0], w)] = level[_norm_edge(e[1], w)] = d
    top = max(depths, default=0)
    return top, depths.count(top)


def defer_crowded_steps(plan: StackingPlan) -> StackingPlan:
    """Same steps, reordered so that single stacks run before crowded ones.

    Any active edge may be processed next.  Stacking several vertices into
    one bubble lowers alpha for the whole drawing, so those steps wait until
    nothing cheaper is available.
    """
    todo = {e: stacked for e, stacked in plan.steps}
    heap = [(0, 0, plan.base_edge)]
    steps = []
    seq = 0
    while heap:
        _, _, e = heapq.heappop(heap)
        stacked = todo[e]
        steps.append((e, stacked))
        for w in stacked:
            for child in (_norm_edge(e[0], w), _norm_edge(e[1], w)):
                seq += 1
                heapq.heappush(heap, (len(todo[child]), seq, child))
    return StackingPlan(plan.base_edge, tuple(steps))


def rank_plans(g: Graph) -> List[StackingPlan]:
    """Plans from every base edge, shallowest first."""
    plans = [defer_crowded_steps(two_tree_plan(g, e)) for e in g.edges]
    return sorted(plans, key=lambda p: (plan_depth(p), p.base_edge))


def draw_two_tree(g: Graph, eps: float = geo.EPS_ANGLE,
                  on_step: Optional[Callable[[BubbledDrawing, str], None]] = None) -> Drawing:
    """Strongly monotone, crossing-free drawing of a 2-tree.

    Any edge can start the stacking; bases are tried shallowest plan first
    and the next one is taken only on a precision error.
    """
    if g.n == 2 and g.m == 1:
        return Drawing(g, [(0.0, 0.0), (1.0, 0.0)])
    failure = None
    for plan in rank_plans(g)[:MAX_BASE_TRIES]:
        try:
            state = build(plan, eps, on_step)
            break
        except PrecisionError as exc:
            failure = failure or exc
    else:
        raise failure
    log.info("2-tree drawing: n=%d, alpha=%.3g", g.n, state.alpha)
    return Drawing(g, [state.pos[v] for v in range(g.n)])

"""Convex strongly monotone drawings of trees.

The tree is drawn top-down from a root.  The root's children sit on a
regular polygon; afterwards every hull leaf ``a`` is expanded in turn by
placing its children on a small circular arc centred at ``a``.  The arc
lies inside the leaf cone of ``a`` (bounded by the perpendiculars of the two
hull edges at ``a``) and inside a disk around ``a`` contained in every
visibility cone ``C(y)``, the set of points p for which the tree path from y
to a is strictly monotone w.r.t. vec(y, p).  The children are placed
symmetrically about the prolongation of the parent edge.

The four invariants maintained after each expansion:

* I1  every leaf is a corner of the convex hull;
* I2  at each hull leaf a_i with parent p_i, the vectors
      perp(a_{i-1} - a_i), a_i - p_i, perp(a_i - a_{i+1}) are in ccw order;
* I3  consecutive edges around a vertex span at most pi, exactly pi only at
      degree-2 vertices;
* I4  the drawing is strongly monotone.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import geometry as geo
from .errors import InvariantError, PrecisionError, UsageError
from .graph import Graph, is_tree
from .verify import Drawing, strongly_monotone

log = logging.getLogger(__name__)

# smallest usable arc radius relative to the drawing diameter
RELATIVE_FLOOR = 1e-13

# fraction of the angle from the prolongation to the nearer leaf-cone side used by the arc
# relative angular weight of a leaf child on the arc
LEAF_WEIGHT = 0.1
# < 1 favours sibling gaps over the outer margin of the extreme children
BALANCE = 0.75
# share of a leaf-cone side used when the extreme child is a leaf
LEAF_SPREAD = 0.9
# fraction of the exact ray reach used as the arc radius
REACH = 0.5
# roots tried before giving up on double precision
MAX_ROOT_TRIES = 8
# cap on the arc half-width
MAX_HALF_WIDTH = 0.25 * math.pi


@dataclass
class PlacementState:
    tree: Graph
    pos: Dict[int, geo.Point] = field(default_factory=dict)
    parent: Dict[int, Optional[int]] = field(default_factory=dict)
    hull_leaves: List[int] = field(default_factory=list)
    children: Dict[int, List[int]] = field(default_factory=dict)

    def drawn(self) -> List[int]:
        return sorted(self.pos)

    def is_leaf(self, v: int) -> bool:
        return sum(1 for u in self.tree.neighbors(v) if u in self.pos) == 1

    def path_to(self, y: int, a: int) -> List[int]:
        """Tree path y -> a inside the drawn subtree."""
        anc_y = [y]
        while self.parent[anc_y[-1]] is not None:
            anc_y.append(self.parent[anc_y[-1]])
        anc_a = [a]
        while self.parent[anc_a[-1]] is not None:
            anc_a.append(self.parent[anc_a[-1]])
        on_a = {v: i for i, v in enumerate(anc_a)}
        for i, v in enumerate(anc_y):
            if v in on_a:
                return anc_y[:i + 1] + anc_a[:on_a[v]][::-1]
        raise InvariantError("vertices lie in different components")

    def partial_drawing(self) -> Tuple[Drawing, List[int]]:
        """Drawing of the drawn subtree with vertices relabelled 0..k-1."""
        verts = self.drawn()
        idx = {v: i for i, v in enumerate(verts)}
        edges = [(idx[v], idx[p]) for v, p in self.parent.items() if p is not None]
        g = Graph(len(verts), tuple(edges))
        return Drawing(g, [self.pos[v] for v in verts]), verts

    def diameter(self) -> float:
        xs = [p[0] for p in self.pos.values()]
        ys = [p[1] for p in self.pos.values()]
        return math.hypot(max(xs) - min(xs), max(ys) - min(ys))


def leaf_cone(state: PlacementState, a: int) -> geo.Cone:
    """Open cone at hull leaf a between the perpendiculars of its hull edges."""
    hull = state.hull_leaves
    i = hull.index(a)
    prev_leaf, next_leaf = hull[i - 1], hull[(i + 1) % len(hull)]
    pa = state.pos[a]
    lo = geo.perp(geo.sub(state.pos[prev_leaf], pa))
    hi = geo.perp(geo.sub(pa, state.pos[next_leaf]))
    cone = geo.Cone(pa, lo, hi)
    prol = geo.sub(pa, state.pos[state.parent[a]])
    if not cone.contains_direction(prol):
        raise InvariantError(f"prolongation at leaf {a} leaves its cone (I2 violated)")
    return cone


def visibility_cone(state: PlacementState, y: int, a: int) -> geo.Cone:
    """Points p such that the tree path y -> a is strictly monotone w.r.t. vec(y, p)."""
    if y == a:
        raise UsageError("visibility cone needs y != a")
    path = state.path_to(y, a)
    ref = geo.sub(state.pos[a], state.pos[y])
    lower, upper = -math.pi, math.pi
    for x, z in zip(path, path[1:]):
        e = geo.sub(state.pos[z], state.pos[x])
        phi = math.atan2(geo.cross(ref, e), geo.dot(ref, e))
        lower = max(lower, phi - geo.HALF_PI)
        upper = min(upper, phi + geo.HALF_PI)
    if not lower < 0.0 < upper:
        raise InvariantError(f"path {y}->{a} is not strictly monotone (I4 violated upstream)")
    base = geo.direction(ref)
    return geo.Cone(state.pos[y], geo.polar(1.0, base + lower), geo.polar(1.0, base + upper))


def free_radius(state: PlacementState, a: int) -> float:
    """Radius of the largest open disk at a inside every visibility cone."""
    pa = state.pos[a]
    delta = math.inf
    for y in state.pos:
        if y != a:
            delta = min(delta, geo.max_disk_radius_in_cone(pa, visibility_cone(state, y, a)))
    return delta


def _constraint_arrays(state: PlacementState, a: int):
    """Half-plane constraints <e, p - y> > 0 over every y and every edge e on path y -> a."""
    import numpy as np

    normals, anchors = [], []
    for y in state.pos:
        if y == a:
            continue
        path = state.path_to(y, a)
        for x, z in zip(path, path[1:]):
            normals.append(geo.sub(state.pos[z], state.pos[x]))
            anchors.append(state.pos[y])
    return np.asarray(normals, dtype=float).reshape(-1, 2), np.asarray(anchors, dtype=float).reshape(-1, 2)


def ray_limit(state: PlacementState, a: int, theta: float, constraints=None) -> float:
    """Largest t such that a + t*(cos theta, sin theta) lies in every visibility cone."""
    import numpy as np

    normals, anchors = constraints if constraints is not None else _constraint_arrays(state, a)
    if normals.size == 0:
        return math.inf
    d = np.array([math.cos(theta), math.sin(theta)])
    pa = np.asarray(state.pos[a])
    along = normals @ d
    room = np.einsum("ij,ij->i", normals, pa[None, :] - anchors)
    mask = along < 0.0
    if not mask.any():
        return math.inf
    return float(np.min(room[mask] / -along[mask]))


def expand_leaf(state: PlacementState, a: int, kids: Sequence[int], eps: float = geo.EPS_ANGLE,
                share: float = REACH, needs_room: Optional[Sequence[bool]] = None) -> None:
    """Place ``kids`` (in ccw order) around hull leaf ``a``.

    The arc radius is ``share`` times the exact reach inside the visibility
    cones, capped by the parent edge length.  ``needs_room[j]`` tells
    whether child j will be expanded later (default: all).
    """
    k = len(kids)
    if k < 1:
        raise UsageError("expand_leaf needs at least one child")
    cone = leaf_cone(state, a)
    pa = state.pos[a]
    prol = geo.sub(pa, state.pos[state.parent[a]])
    theta = geo.direction(prol)
    to_lo = geo.ccw_angle(cone.lo, prol)
    to_hi = geo.ccw_angle(prol, cone.hi)
    offsets = arc_offsets(needs_room if needs_room is not None else [True] * k, to_lo, to_hi)
    half_width = min(-offsets[0], offsets[-1]) if k > 1 else 0.0
    angles = [theta + o for o in offsets]
    constraints = _constraint_arrays(state, a)
    reach = min(ray_limit(state, a, ang, constraints) for ang in angles)
    scale = state.diameter()
    # half the reach keeps a margin; never longer than the parent edge
    radius = min(share * reach, geo.dist(pa, state.pos[state.parent[a]]))
    if k > 1 and half_width <= eps:
        raise PrecisionError(
            f"leaf cone at {a} too thin ({half_width:.3g} rad); use exact arithmetic for this tree")
    i = state.hull_leaves.index(a)
    hull = state.hull_leaves[:i] + list(kids) + state.hull_leaves[i + 1:]
    while True:
        if not radius > RELATIVE_FLOOR * scale:
            raise PrecisionError(
                f"placement radius at {a} is {radius:.3g} against diameter {scale:.3g}; "
                "double precision cannot resolve it, use exact arithmetic for this tree")
        placed = {c: geo.add(pa, geo.polar(radius, ang)) for c, ang in zip(kids, angles)}
        # the new corners also move the leaf cones of the neighbouring leaves
        if _hull_ok(state, hull, placed, a):
            break
        radius *= 0.5
    for c in kids:
        state.pos[c] = placed[c]
        state.parent[c] = a
    state.hull_leaves = hull
    log.debug("expanded %d: k=%d radius=%.3g half-width=%.3g", a, k, radius, half_width)


def _hull_ok(state: PlacementState, hull: List[int], placed: Dict[int, geo.Point], a: int) -> bool:
    """I1 and I2 for a proposed hull-leaf sequence."""
    def at(v):
        return placed[v] if v in placed else state.pos[v]

    def prol(v):
        return geo.sub(at(v), at(a if v in placed else state.parent[v]))

    m = len(hull)
    for j in range(m):
        x, y, z = at(hull[j - 1]), at(hull[j]), at(hull[(j + 1) % m])
        if m >= 3 and geo.orientation(x, y, z) <= 0:
            return False
        if not geo.in_ccw_order(geo.perp(geo.sub(x, y)), prol(hull[j]), geo.perp(geo.sub(y, z))):
            return False
    return True


_FRACTIONS = (0.2, 0.35, 0.5, 0.65, 0.8, 0.9)


def arc_offsets(needs_room: Sequence[bool], to_lo: float, to_hi: float) -> List[float]:
    """Angular offsets of the children from the prolongation, ccw order.

    The first child goes clockwise of the prolongation and the last one
    counterclockwise, so every angle at the expanded vertex stays below pi.
    Leaf children are packed tightly (weight LEAF_WEIGHT) so children that
    will be expanded keep wide gaps, and the two sides of the arc are sized
    independently to keep the narrowest cone of an expandable child as wide
    as possible.
    """
    k = len(needs_room)
    if k == 1:
        return [0.0]
    w = [1.0 if r else LEAF_WEIGHT for r in needs_room]
    gaps = [w[j] + w[j + 1] for j in range(k - 1)]
    total = sum(gaps)
    frac = [0.0]
    for g in gaps:
        frac.append(frac[-1] + g / total)
    lo_cap = min(to_lo, MAX_HALF_WIDTH)
    hi_cap = min(to_hi, MAX_HALF_WIDTH)
    if not any(needs_room):
        hw_lo, hw_hi = LEAF_SPREAD * lo_cap, LEAF_SPREAD * hi_cap
    else:
        best = None
        for x in _FRACTIONS:
            for y in _FRACTIONS:
                hw_lo, hw_hi = x * lo_cap, y * hi_cap
                span = hw_lo + hw_hi
                score = math.inf
                for j in range(k):
                    if not needs_room[j]:
                        continue
                    lo = to_lo - hw_lo if j == 0 else 0.5 * span * (frac[j] - frac[j - 1]) / BALANCE
                    hi = to_hi - hw_hi if j == k - 1 else 0.5 * span * (frac[j + 1] - frac[j]) / BALANCE
                    score = min(score, lo, hi)
                if best is None or score > best[0]:
                    best = (score, hw_lo, hw_hi)
        _, hw_lo, hw_hi = best
    span = hw_lo + hw_hi
    out = [-hw_lo + span * f for f in frac]
    out[-1] = hw_hi
    return out


def _chain_tails(t: Graph, root: int) -> Dict[int, int]:
    """Number of single-child steps that follow each vertex in the rooted tree."""
    order, parent = [root], {root: None}
    for v in order:
        for u in t.neighbors(v):
            if u not in parent:
                parent[u] = v
                order.append(u)
    tails: Dict[int, int] = {}
    for v in reversed(order):
        kids = [u for u in t.neighbors(v) if u != parent[v]]
        tails[v] = 1 + tails[kids[0]] if len(kids) == 1 else 0
    return tails


def _share(tails: Dict[int, int], kids: Sequence[int]) -> float:
    # a chain of single children splits its budget evenly instead of halving it per step
    if len(kids) == 1:
        return 1.0 / (tails[kids[0]] + 2)
    return REACH


def predicted_log_radius(t: Graph, root: int) -> float:
    """Predicted log of the smallest arc radius when drawing from ``root``.

    Replays the angular bookkeeping of the construction; a child's radius
    budget shrinks by 1 - cos of its sibling spacing.
    """
    tails = _chain_tails(t, root)
    k0 = t.degree(root)
    half = math.pi / k0
    budget0 = 1.0 if k0 == 2 else 1.0 - math.cos(2.0 * half)
    worst = 0.0
    # (vertex, parent, lo margin, hi margin, edge length, radius budget for kids)
    stack = [(u, root, half, half, 1.0, budget0) for u in t.neighbors(root)]
    while stack:
        v, p, ml, mh, edge, budget = stack.pop()
        kids = [u for u in t.neighbors(v) if u != p]
        if not kids:
            continue
        k = len(kids)
        r = min(_share(tails, kids) * budget, edge)
        worst = min(worst, math.log(r))
        if k == 1:
            stack.append((kids[0], v, ml, mh, r, budget - r))
            continue
        off = arc_offsets([t.degree(u) > 1 for u in kids], ml, mh)
        for j, u in enumerate(kids):
            lo = ml + off[0] if j == 0 else 0.5 * (off[j] - off[j - 1])
            hi = mh - off[-1] if j == k - 1 else 0.5 * (off[j + 1] - off[j])
            gap = 2.0 * min(lo if j else math.inf, hi if j < k - 1 else math.inf)
            stack.append((u, v, lo, hi, r, r * (1.0 - math.cos(gap))))
    return worst


def rank_roots(t: Graph) -> List[int]:
    """Vertices of degree >= 2, best predicted smallest radius first."""
    cands = [v for v in range(t.n) if t.degree(v) >= 2]
    return sorted(cands, key=lambda v: (-predicted_log_radius(t, v), v))


def choose_root(t: Graph) -> int:
    return rank_roots(t)[0]


def _ordered_children(t: Graph, v: int, parent: Optional[int], rotation) -> List[int]:
    if rotation is None:
        return [u for u in t.neighbors(v) if u != parent]
    rot = list(rotation[v])
    if parent is None:
        return rot
    i = rot.index(parent)
    return rot[i + 1:] + rot[:i]


def initial_state(t: Graph, root: int, rotation=None) -> PlacementState:
    state = PlacementState(t)
    state.pos[root] = (0.0, 0.0)
    state.parent[root] = None
    kids = _ordered_children(t, root, None, rotation)
    k = len(kids)
    for j, c in enumerate(kids):
        # two children exactly opposite, so a degree-2 root is truly collinear
        state.pos[c] = (1.0 - 2.0 * j, 0.0) if k == 2 else geo.polar(1.0, 2.0 * math.pi * j / k)
        state.parent[c] = root
    state.hull_leaves = list(kids)
    return state


def draw_tree(t: Graph, rotation: Optional[Sequence[Sequence[int]]] = None,
              root: Optional[int] = None, eps: float = geo.EPS_ANGLE,
              on_step=None) -> Drawing:
    """Convex strongly monotone drawing of a tree.

    ``rotation`` optionally prescribes the ccw neighbour order at every
    vertex; the drawing then realises it.  ``on_step(state)`` is invoked
    after the base case and after each expansion.
    """
    if not is_tree(t):
        raise UsageError("draw_tree expects a tree")
    if t.n == 1:
        return Drawing(t, [(0.0, 0.0)])
    if t.n == 2:
        return Drawing(t, [(0.0, 0.0), (1.0, 0.0)])
    if root is not None:
        return _draw_from(t, root, rotation, eps, on_step)
    # the predicted radius is a heuristic; a root that runs out of precision
    # is not evidence against the others
    failure = None
    for r in rank_roots(t)[:MAX_ROOT_TRIES]:
        try:
            return _draw_from(t, r, rotation, eps, on_step)
        except PrecisionError as exc:
            log.info("root %d ran out of precision: %s", r, exc)
            failure = failure or exc
    raise failure


def _draw_from(t: Graph, root: int, rotation, eps: float, on_step) -> Drawing:
    if t.degree(root) < 2:
        raise UsageError("root must have degree at least two")
    state = initial_state(t, root, rotation)
    if on_step:
        on_step(state)
    tails = _chain_tails(t, root)
    queue = deque(state.hull_leaves)
    while queue:
        a = queue.popleft()
        kids = _ordered_children(t, a, state.parent[a], rotation)
        if not kids:
            continue
        expand_leaf(state, a, kids, eps, _share(tails, kids), [t.degree(c) > 1 for c in kids])
        if on_step:
            on_step(state)
        queue.extend(kids)
    spread = state.diameter()
    smallest = min(geo.dist(state.pos[v], state.pos[p]) for v, p in state.parent.items() if p is not None)
    log.info("tree drawing: n=%d root=%d diameter=%.3g shortest edge=%.3g", t.n, root, spread, smallest)
    return Drawing(t, [state.pos[v] for v in range(t.n)])


# ---------------------------------------------------------------------------
# invariant checks
# ---------------------------------------------------------------------------

def check_invariants(state: PlacementState, eps: float = geo.EPS_ANGLE) -> Dict[str, bool]:
    drawing, verts = state.partial_drawing()
    idx = {v: i for i, v in enumerate(verts)}
    pts = [state.pos[v] for v in verts]
    hull = geo.convex_hull(pts)
    corners = set(hull)
    leaves = [v for v in verts if state.is_leaf(v)]
    i1 = all(state.pos[v] in corners for v in leaves) and sorted(leaves) == sorted(state.hull_leaves)
    if i1 and len(hull) >= 3:
        order = [h for h in (next((v for v in leaves if state.pos[v] == c), None) for c in hull) if h is not None]
        j = order.index(state.hull_leaves[0])
        i1 = order[j:] + order[:j] == state.hull_leaves
    i2 = True
    hl = state.hull_leaves
    for i, a in enumerate(hl):
        pa = state.pos[a]
        lo = geo.perp(geo.sub(state.pos[hl[i - 1]], pa))
        mid = geo.sub(pa, state.pos[state.parent[a]])
        hi = geo.perp(geo.sub(pa, state.pos[hl[(i + 1) % len(hl)]]))
        if not geo.in_ccw_order(lo, mid, hi):
            i2 = False
    i3 = True
    for v in verts:
        deg = drawing.graph.degree(idx[v])
        if deg < 2:
            continue
        angs = sorted(geo.direction(drawing.vec(idx[v], u)) for u in drawing.graph.neighbors(idx[v]))
        gaps = [angs[j + 1] - angs[j] for j in range(len(angs) - 1)] + [angs[0] + geo.TWO_PI - angs[-1]]
        g = max(gaps)
        if g > math.pi + eps or (deg != 2 and g >= math.pi - eps):
            i3 = False
    i4 = strongly_monotone(drawing, eps).ok
    return {"I1": i1, "I2": i2, "I3": i3, "I4": i4}

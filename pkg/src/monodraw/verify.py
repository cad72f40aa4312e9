"""Decide (strong) monotonicity, planarity and convexity of straight-line drawings."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import geometry as geo
from .errors import UsageError, ValidationError
from .graph import Graph, PlaneEmbedding, embedding_from_positions, is_tree, rotation_matches

Pair = Tuple[int, int]


@dataclass(frozen=True)
class Drawing:
    graph: Graph
    pos: Tuple[geo.Point, ...]

    def __post_init__(self):
        pos = tuple((float(p[0]), float(p[1])) for p in self.pos)
        if len(pos) != self.graph.n:
            raise ValidationError(f"{len(pos)} positions for {self.graph.n} vertices")
        for p in pos:
            if not (math.isfinite(p[0]) and math.isfinite(p[1])):
                raise ValidationError(f"non-finite coordinate {p}")
        if len(set(pos)) != len(pos):
            raise ValidationError("two vertices share a position")
        object.__setattr__(self, "pos", pos)

    def vec(self, a: int, b: int) -> geo.Vec:
        return geo.sub(self.pos[b], self.pos[a])

    def diameter(self) -> float:
        if self.graph.n < 2:
            return 0.0
        arr = np.asarray(self.pos)
        return float(np.linalg.norm(arr.max(axis=0) - arr.min(axis=0)))


@dataclass
class WitnessReport:
    per_pair: Dict[Pair, Optional[List[int]]]
    alpha: float
    degenerate: List[Pair] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(p is not None for p in self.per_pair.values())

    @property
    def missing(self) -> List[Pair]:
        return [k for k, p in self.per_pair.items() if p is None]


def edge_slack(d: Drawing, a: int, b: int, direction: geo.Vec) -> float:
    return geo.slack(d.vec(a, b), direction)


def path_slack(d: Drawing, path: Sequence[int]) -> float:
    """Minimum edge slack of a path with respect to its end-to-end vector."""
    direction = d.vec(path[0], path[-1])
    return min(edge_slack(d, path[i], path[i + 1], direction) for i in range(len(path) - 1))


def is_strongly_monotone_path(d: Drawing, path: Sequence[int]) -> bool:
    """Raw dot-product check, no margin."""
    if len(path) < 2 or len(set(path)) != len(path):
        return False
    direction = d.vec(path[0], path[-1])
    for a, b in zip(path, path[1:]):
        if not d.graph.has_edge(a, b):
            return False
        if geo.dot(d.vec(a, b), direction) <= 0.0:
            return False
    return True


def strongly_monotone_pair(d: Drawing, u: int, v: int, eps: float = geo.EPS_ANGLE) -> Optional[List[int]]:
    """A u-v path whose every edge has slack > eps w.r.t. vec(u, v), or None.

    Search over the digraph keeping only such edges; it is acyclic because
    every kept edge strictly increases the projection onto vec(u, v).
    """
    if u == v:
        raise UsageError("pair endpoints must differ")
    direction = d.vec(u, v)
    parent = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        for y in d.graph.neighbors(x):
            if y not in parent and edge_slack(d, x, y, direction) > eps:
                parent[y] = x
                queue.append(y)
    if v not in parent:
        return None
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


def widest_path(d: Drawing, u: int, v: int, eps: float = geo.EPS_ANGLE) -> Tuple[float, Optional[List[int]]]:
    """Maximin-slack u-v path over edges with slack > eps.

    Returns ``(value, path)``; value is -inf when no path exists.  Vertices are
    relaxed in order of projection onto vec(u, v), a topological order of the
    filtered digraph.
    """
    if u == v:
        raise UsageError("pair endpoints must differ")
    direction = d.vec(u, v)
    pu = geo.dot(d.pos[u], direction)
    pv = geo.dot(d.pos[v], direction)
    proj = [geo.dot(p, direction) for p in d.pos]
    order = sorted((x for x in range(d.graph.n) if pu <= proj[x] <= pv), key=lambda x: (proj[x], x))
    best = {u: math.inf}
    parent: Dict[int, Optional[int]] = {u: None}
    for x in order:
        if x not in best:
            continue
        if x == v:
            break
        bx = best[x]
        for y in d.graph.neighbors(x):
            s = edge_slack(d, x, y, direction)
            if s <= eps:
                continue
            cand = min(bx, s)
            if cand > best.get(y, -math.inf):
                best[y] = cand
                parent[y] = x
    if v not in best:
        return -math.inf, None
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return best[v], path[::-1]


def strongly_monotone(d: Drawing, eps: float = geo.EPS_ANGLE) -> WitnessReport:
    """Witness for every unordered pair; alpha is the worst best-path slack."""
    per_pair: Dict[Pair, Optional[List[int]]] = {}
    degenerate = []
    alpha = math.inf
    for u in range(d.graph.n):
        for v in range(u + 1, d.graph.n):
            val, path = widest_path(d, u, v, eps)
            per_pair[(u, v)] = path
            if path is None:
                alpha = 0.0
                # a path that exists only within the margin is reported, not decided
                if widest_path(d, u, v, -eps)[1] is not None:
                    degenerate.append((u, v))
            else:
                alpha = min(alpha, val)
    if not per_pair:
        alpha = geo.HALF_PI
    return WitnessReport(per_pair, alpha, degenerate)


class NotStronglyMonotone(UsageError):
    def __init__(self, pair):
        super().__init__(f"no strongly monotone path for pair {pair}")
        self.pair = pair


def safety(d: Drawing, eps: float = geo.EPS_ANGLE) -> float:
    """Global angular slack alpha of a strongly monotone drawing."""
    alpha = geo.HALF_PI
    for u in range(d.graph.n):
        for v in range(u + 1, d.graph.n):
            val, path = widest_path(d, u, v, eps)
            if path is None:
                raise NotStronglyMonotone((u, v))
            alpha = min(alpha, val)
    return alpha


def _reachable_sets(d: Drawing, direction: geo.Vec) -> List[set]:
    n = d.graph.n
    succ = [[y for y in d.graph.neighbors(x) if geo.dot(d.vec(x, y), direction) > 0.0] for x in range(n)]
    out = []
    for s in range(n):
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(seen)
    return out


def monotone_directions(d: Drawing) -> List[geo.Vec]:
    """One direction inside each open arc cut out by the edge normals."""
    crit = []
    for a, b in d.graph.edges:
        t = geo.direction(d.vec(a, b))
        crit.append((t + geo.HALF_PI) % geo.TWO_PI)
        crit.append((t - geo.HALF_PI) % geo.TWO_PI)
    crit = sorted(set(crit))
    if not crit:
        return [(1.0, 0.0)]
    dirs = []
    for i, t in enumerate(crit):
        nxt = crit[(i + 1) % len(crit)] + (geo.TWO_PI if i == len(crit) - 1 else 0.0)
        if nxt - t > 0.0:
            dirs.append(geo.polar(1.0, 0.5 * (t + nxt)))
    return dirs


def monotone(d: Drawing) -> bool:
    """Every pair joined by a path monotone in some direction."""
    n = d.graph.n
    need = {(u, v) for u in range(n) for v in range(u + 1, n)}
    for direction in monotone_directions(d):
        reach = _reachable_sets(d, direction)
        need = {(u, v) for (u, v) in need if v not in reach[u] and u not in reach[v]}
        if not need:
            return True
    return not need


def crossing_free(d: Drawing) -> Tuple[bool, Optional[Tuple]]:
    """Pairwise segment test; also rejects collinear overlap of adjacent edges."""
    edges = d.graph.edges
    P = d.pos
    for i in range(len(edges)):
        a, b = edges[i]
        for j in range(i + 1, len(edges)):
            c, e = edges[j]
            if geo.segments_intersect(P[a], P[b], P[c], P[e]):
                return False, (edges[i], edges[j])
    return True, None


# ---------------------------------------------------------------------------
# convexity
# ---------------------------------------------------------------------------

def _sign(x: float) -> int:
    return (x > 0.0) - (x < 0.0)


def _collinear_overlap(p, p2, ray_a, q, q2, ray_b) -> bool:
    r = geo.sub(p2, p)
    rr = geo.dot(r, r)
    s0 = geo.dot(geo.sub(q, p), r) / rr
    s1 = geo.dot(geo.sub(q2, p), r) / rr
    if ray_b:
        lo_b, hi_b = (s0, math.inf) if s1 >= s0 else (-math.inf, s0)
    else:
        lo_b, hi_b = min(s0, s1), max(s0, s1)
    hi_a = math.inf if ray_a else 1.0
    return max(0.0, lo_b) <= min(hi_a, hi_b)


def _elements_meet(A, B) -> bool:
    """A, B = (start, through, is_ray): segments or rays sharing no vertex.

    Decided with the filtered orientation predicate; an undecidable sign
    counts as contact.
    """
    p, p2, ray_a = A
    q, q2, ray_b = B
    if not ray_a and not ray_b:
        return geo.segments_intersect(p, p2, q, q2)
    if not ray_a:
        p, p2, ray_a, q, q2, ray_b = q, q2, ray_b, p, p2, ray_a
    o1 = geo.orientation(p, p2, q)
    o2 = geo.orientation(p, p2, q2)
    if o1 == 0 and o2 == 0:
        return _collinear_overlap(p, p2, ray_a, q, q2, ray_b)
    if not ray_b:
        if o1 * o2 > 0:
            return False
        # the segment crosses the ray's line; check that it does so ahead of p
        return geo.orientation(p, q, q2) * _sign(o2 - o1) >= 0
    r, w = geo.sub(p2, p), geo.sub(q2, q)
    den = geo.cross(r, w)
    if abs(den) <= 8.0 * 2.0 ** -53 * geo.norm(r) * geo.norm(w):
        return False  # parallel and not collinear
    sd = _sign(den)
    return geo.orientation(p, q, q2) * sd >= 0 and -o1 * sd >= 0


def rounding_tolerance(d: Drawing, v: int) -> float:
    """Angular uncertainty at v caused by rounding the coordinates to doubles."""
    big = max(abs(c) for p in d.pos for c in p) or 1.0
    short = min(geo.dist(d.pos[v], d.pos[u]) for u in d.graph.neighbors(v))
    return 8.0 * 2.0 ** -53 * big / short


def _sorted_incident(d: Drawing, v: int) -> List[Tuple[float, int]]:
    return sorted((geo.direction(d.vec(v, u)), u) for u in d.graph.neighbors(v))


def _max_gap(d: Drawing, v: int) -> float:
    angs = [a for a, _ in _sorted_incident(d, v)]
    if len(angs) == 1:
        return geo.TWO_PI
    gaps = [angs[i + 1] - angs[i] for i in range(len(angs) - 1)]
    gaps.append(angs[0] + geo.TWO_PI - angs[-1])
    return max(gaps)


def tree_convexity(d: Drawing, eps: float = geo.EPS_ANGLE) -> str:
    """'strictlyConvex', 'convex' or 'notConvex' for a drawn tree.

    Leaf edges are replaced by rays leaving the parent through the leaf; the
    augmentation must be crossing free, every angle at an internal vertex at
    most pi (strictly below pi and no degree-2 vertex for the strict
    verdict) and the total turning along each unbounded face at most pi
    (strictly below for the strict verdict).
    """
    g = d.graph
    if not is_tree(g):
        raise UsageError("tree_convexity expects a tree")
    if g.n <= 2:
        return "strictlyConvex"
    leaf = [g.degree(v) == 1 for v in range(g.n)]
    elems = []
    for a, b in g.edges:
        if leaf[a]:
            a, b = b, a
        elems.append(((a, b), (d.pos[a], d.pos[b], leaf[b])))
    for i in range(len(elems)):
        (a, b), A = elems[i]
        for j in range(i + 1, len(elems)):
            (c, e), B = elems[j]
            shared = {a, b} & {c, e}
            if shared:
                (s,) = shared
                x = b if a == s else a
                y = e if c == s else c
                if geo.angle_between(geo.sub(d.pos[x], d.pos[s]), geo.sub(d.pos[y], d.pos[s])) <= eps:
                    return "notConvex"
                continue
            if _elements_meet(A, B):
                return "notConvex"
    strict = True
    internal = [v for v in range(g.n) if not leaf[v]]
    tol = {v: eps + rounding_tolerance(d, v) for v in internal}
    for v in internal:
        gap = _max_gap(d, v)
        if gap > math.pi + tol[v]:
            return "notConvex"
        if g.degree(v) == 2 or gap >= math.pi - eps:
            strict = False
    # turning along each unbounded face of the augmentation
    rot = {v: [u for _, u in _sorted_incident(d, v)] for v in range(g.n)}
    start_leaf = next(v for v in range(g.n) if leaf[v])
    dart = (start_leaf, rot[start_leaf][0])
    first = dart
    turning = 0.0
    slop = eps
    while True:
        x, v = dart
        if leaf[v]:
            if turning > math.pi + slop:
                return "notConvex"
            if turning >= math.pi - eps:
                strict = False
            turning = 0.0
            slop = eps
            dart = (v, x)
        else:
            r = rot[v]
            y = r[(r.index(x) - 1) % len(r)]
            interior = geo.ccw_angle(d.vec(v, y), d.vec(v, x))
            turning += math.pi - interior
            slop += tol[v]
            dart = (v, y)
        if dart == first:
            break
    return "strictlyConvex" if strict else "convex"


def realized_embedding(d: Drawing) -> PlaneEmbedding:
    return embedding_from_positions(d.graph, d.pos)


def convex_faces(d: Drawing, emb: PlaneEmbedding, eps: float = geo.EPS_ANGLE) -> bool:
    """All internal faces of ``emb`` drawn as strictly convex polygons."""
    if emb.graph.edges != d.graph.edges and set(emb.graph.edges) != set(d.graph.edges):
        raise ValidationError("embedding and drawing have different graphs")
    geo_rot = realized_embedding(d).rotation
    for v in range(d.graph.n):
        if not rotation_matches(emb.rotation[v], geo_rot[v]):
            raise ValidationError(f"drawing does not realise the rotation at vertex {v}")
    for i, f in enumerate(emb.faces):
        if i == emb.outer_face:
            continue
        if not face_strictly_convex(d, f.vertices, eps):
            return False
    return True


def face_strictly_convex(d: Drawing, verts: Sequence[int], eps: float = geo.EPS_ANGLE) -> bool:
    k = len(verts)
    if k < 3 or len(set(verts)) != k:
        return False
    total = 0.0
    for i in range(k):
        a, b, c = d.pos[verts[i - 1]], d.pos[verts[i]], d.pos[verts[(i + 1) % k]]
        turn = math.atan2(geo.cross(geo.sub(b, a), geo.sub(c, b)), geo.dot(geo.sub(b, a), geo.sub(c, b)))
        if turn <= eps:
            return False
        total += turn
    return abs(total - geo.TWO_PI) < 1e-6


def bounded_faces_strictly_convex(d: Drawing, eps: float = geo.EPS_ANGLE) -> bool:
    """Convex-face check using the rotation read off the drawing itself."""
    return convex_faces(d, realized_embedding(d), eps)


# ---------------------------------------------------------------------------
# vectorised widest paths (used to certify point sets)
# ---------------------------------------------------------------------------

def _slack_matrix(vecs: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """slack[i, t] of vector i w.r.t. direction t."""
    dots = vecs @ dirs.T
    crosses = vecs[:, 0:1] * dirs[None, :, 1] - vecs[:, 1:2] * dirs[None, :, 0]
    return geo.HALF_PI - np.arctan2(np.abs(crosses), dots)


def widest_to_points(pos: np.ndarray, darts: np.ndarray, src_point, src_attach: Sequence[int],
                     targets: np.ndarray, target_attach: Sequence[Sequence[int]],
                     eps: float = geo.EPS_ANGLE) -> np.ndarray:
    """Maximin slack from one source to many targets through real vertices.

    ``pos`` (N, 2) real vertex positions, ``darts`` (D, 2) directed real
    edges.  The source sits at ``src_point`` joined to the real vertices
    ``src_attach``; target t sits at ``targets[t]`` joined to
    ``target_attach[t]``.  A target that is itself a real vertex v should be
    given with attach ``[v]`` and its exact position; then the final hop has
    zero length and is skipped.  Returns an array of values (-inf if no
    strongly monotone route exists).
    """
    N = pos.shape[0]
    T = targets.shape[0]
    src = np.asarray(src_point, dtype=float)
    dirs = targets - src[None, :]
    W = np.full((N, T), -np.inf)
    for a in src_attach:
        v = pos[a] - src
        if not v.any():
            W[a, :] = np.inf
            continue
        s = _slack_matrix(v[None, :], dirs)[0]
        W[a, :] = np.maximum(W[a, :], np.where(s > eps, s, -np.inf))
    if darts.size:
        dvec = pos[darts[:, 1]] - pos[darts[:, 0]]
        S = _slack_matrix(dvec, dirs)
        S = np.where(S > eps, S, -np.inf)
        xs, ys = darts[:, 0], darts[:, 1]
        for _ in range(N):
            cand = np.minimum(W[xs], S)
            newW = W.copy()
            np.maximum.at(newW, ys, cand)
            if np.array_equal(newW, W):
                break
            W = newW
    # final hop from an attachment vertex to each target, all at once
    ts = np.array([t for t in range(T) for _ in target_attach[t]], dtype=int)
    xs = np.array([x for t in range(T) for x in target_attach[t]], dtype=int)
    out = np.full(T, -np.inf)
    if ts.size:
        hop = targets[ts] - pos[xs]
        s = geo.HALF_PI - np.arctan2(np.abs(hop[:, 0] * dirs[ts, 1] - hop[:, 1] * dirs[ts, 0]),
                                     np.einsum("ij,ij->i", hop, dirs[ts]))
        zero = ~hop.any(axis=1)
        val = np.where(zero, W[xs, ts], np.where(s > eps, np.minimum(W[xs, ts], s), -np.inf))
        np.maximum.at(out, ts, val)
    return out

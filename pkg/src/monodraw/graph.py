"""Combinatorial graphs, rotation systems, faces and graph-class recognition.

Vertices are ``0..n-1``.  A rotation system lists, for every vertex, its
neighbours in counterclockwise order.  Faces are traced with the face on the
left of each dart, so in a straight-line realisation bounded faces come out
counterclockwise and the outer face clockwise.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from .errors import ClassificationError, ValidationError

Edge = Tuple[int, int]


def _norm_edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        seen = set()
        normed = []
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValidationError(f"self-loop at vertex {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValidationError(f"edge ({a},{b}) out of range for n={self.n}")
            e = _norm_edge(a, b)
            if e in seen:
                raise ValidationError(f"duplicate edge {e}")
            seen.add(e)
            normed.append(e)
        object.__setattr__(self, "edges", tuple(normed))
        object.__setattr__(self, "_edge_set", frozenset(seen))
        adj: List[List[int]] = [[] for _ in range(self.n)]
        for a, b in normed:
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(x)) for x in adj))

    @classmethod
    def from_edges(cls, edges, n: Optional[int] = None) -> "Graph":
        edges = [tuple(e) for e in edges]
        if n is None:
            n = 1 + max((max(e) for e in edges), default=-1)
        return cls(n, tuple(edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, a: int, b: int) -> bool:
        return _norm_edge(a, b) in self._edge_set

    def edge_index(self) -> Dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def add_edges(self, extra) -> "Graph":
        return Graph(self.n, self.edges + tuple(_norm_edge(*e) for e in extra))


@dataclass(frozen=True)
class Face:
    vertices: Tuple[int, ...]

    def darts(self):
        k = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % k]) for i in range(k)]

    def __len__(self):
        return len(self.vertices)


@dataclass
class PlaneEmbedding:
    graph: Graph
    rotation: List[List[int]]
    outer_face: int = 0
    _faces: Optional[List[Face]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.rotation = [list(r) for r in self.rotation]
        if len(self.rotation) != self.graph.n:
            raise ValidationError("rotation must list every vertex")
        for v, rot in enumerate(self.rotation):
            if sorted(rot) != list(self.graph.neighbors(v)):
                raise ValidationError(
                    f"rotation at {v} lists {rot}, neighbours are {list(self.graph.neighbors(v))}")

    def succ(self, v: int, u: int) -> int:
        """Neighbour following u counterclockwise around v."""
        rot = self.rotation[v]
        return rot[(rot.index(u) + 1) % len(rot)]

    def pred(self, v: int, u: int) -> int:
        rot = self.rotation[v]
        return rot[(rot.index(u) - 1) % len(rot)]

    @property
    def faces(self) -> List[Face]:
        if self._faces is None:
            self._faces = trace_faces(self)
        return self._faces

    def dart_face(self) -> Dict[Tuple[int, int], int]:
        out = {}
        for i, f in enumerate(self.faces):
            for d in f.darts():
                out[d] = i
        return out

    def face_between(self, v: int, u: int) -> int:
        """Face in the angular sector from u counterclockwise to succ(v, u)."""
        return self.dart_face()[(v, u)]


def trace_faces(emb: PlaneEmbedding) -> List[Face]:
    """Walk every dart once; the next dart after (u, v) is (v, pred_v(u))."""
    g = emb.graph
    pos_in_rot = [{u: i for i, u in enumerate(r)} for r in emb.rotation]
    unused = set()
    for a, b in g.edges:
        unused.add((a, b))
        unused.add((b, a))
    faces: List[Face] = []
    for start in sorted(unused):
        if start not in unused:
            continue
        cyc = []
        d = start
        while True:
            if d not in unused:
                raise ValidationError(f"inconsistent rotation: dart {d} visited twice")
            unused.discard(d)
            u, v = d
            cyc.append(u)
            rot = emb.rotation[v]
            w = rot[(pos_in_rot[v][u] - 1) % len(rot)]
            d = (v, w)
            if d == start:
                break
        faces.append(Face(tuple(cyc)))
    if g.n == 1 and not faces:
        faces.append(Face((0,)))
    return faces


def faces_of(emb: PlaneEmbedding):
    """Face boundary cycles plus the dual multigraph as an edge list.

    Returns ``(faces, dual_edges)`` where ``dual_edges[i]`` is the pair of
    faces on both sides of ``graph.edges[i]``.
    """
    faces = emb.faces
    df = emb.dart_face()
    dual = [(df[(a, b)], df[(b, a)]) for a, b in emb.graph.edges]
    return faces, dual


def check_euler(emb: PlaneEmbedding) -> bool:
    g = emb.graph
    comps = nx.number_connected_components(g.to_networkx()) if g.n else 0
    # each component contributes its own outer face in a disjoint rotation
    return g.n - g.m + len(emb.faces) == 1 + comps


def embedding_from_positions(g: Graph, pos: Sequence, outer: Optional[int] = None) -> PlaneEmbedding:
    """Rotation system read off a straight-line drawing (angular order)."""
    import math

    rot = []
    for v in range(g.n):
        nb = list(g.neighbors(v))
        nb.sort(key=lambda u: math.atan2(pos[u][1] - pos[v][1], pos[u][0] - pos[v][0]))
        rot.append(nb)
    emb = PlaneEmbedding(g, rot)
    if outer is None:
        outer = outer_face_by_area(emb, pos)
    emb.outer_face = outer
    return emb


def outer_face_by_area(emb: PlaneEmbedding, pos: Sequence) -> int:
    """Index of the face with the most negative signed area."""
    best, best_area = 0, float("inf")
    for i, f in enumerate(emb.faces):
        a = 0.0
        vs = f.vertices
        for j in range(len(vs)):
            p, q = pos[vs[j]], pos[vs[(j + 1) % len(vs)]]
            a += p[0] * q[1] - p[1] * q[0]
        if a < best_area:
            best, best_area = i, a
    return best


# ---------------------------------------------------------------------------
# recognition
# ---------------------------------------------------------------------------

def is_tree(g: Graph) -> bool:
    return g.n >= 1 and g.m == g.n - 1 and g.is_connected()


def is_irreducible_tree(g: Graph) -> bool:
    return is_tree(g) and all(g.degree(v) != 2 for v in range(g.n))


def is_planar(g: Graph) -> bool:
    return nx.check_planarity(g.to_networkx())[0]


def _with_apex(g: Graph) -> nx.Graph:
    h = g.to_networkx()
    h.add_edges_from((g.n, v) for v in range(g.n))
    return h


def is_outerplanar(g: Graph) -> bool:
    return nx.check_planarity(_with_apex(g))[0]


def two_tree_peeling(g: Graph) -> Optional[List[Tuple[int, int, int]]]:
    """Peel simplicial degree-2 vertices, lowest id first.

    Returns ``[(w, a, b), ...]`` in peeling order (w removed with neighbours
    a < b) or None when the graph does not reduce to a single edge.
    """
    if g.n < 2 or g.m != 2 * g.n - 3:
        return None
    adj = {v: set(g.neighbors(v)) for v in range(g.n)}
    order = []
    alive = set(range(g.n))
    while len(alive) > 2:
        cand = None
        for v in sorted(alive):
            if len(adj[v]) == 2:
                a, b = sorted(adj[v])
                if b in adj[a]:
                    cand = (v, a, b)
                    break
        if cand is None:
            return None
        v, a, b = cand
        order.append(cand)
        alive.discard(v)
        adj[a].discard(v)
        adj[b].discard(v)
        del adj[v]
    a, b = sorted(alive)
    if b not in adj[a]:
        return None
    return order


def is_two_tree(g: Graph) -> bool:
    return two_tree_peeling(g) is not None


def is_three_connected(g: Graph) -> bool:
    """No separating pair; pairwise two-vertex deletion check."""
    if g.n < 4 or not g.is_connected():
        return False
    nxg = g.to_networkx()
    for a, b in itertools.combinations(range(g.n), 2):
        h = nxg.copy()
        h.remove_nodes_from((a, b))
        if not nx.is_connected(h):
            return False
    return True


def classify(g: Graph) -> FrozenSet[str]:
    if g.n == 0 or not g.is_connected():
        raise ValidationError("classify expects a non-empty connected graph")
    tags = set()
    if is_tree(g):
        tags.add("tree")
        if is_irreducible_tree(g):
            tags.add("irreducibleTree")
    if is_outerplanar(g):
        tags.add("outerplanar")
    if is_two_tree(g):
        tags.add("twoTree")
    if is_planar(g) and is_three_connected(g):
        tags.add("planar3Connected")
    return frozenset(tags)


# ---------------------------------------------------------------------------
# 2-tree stacking plans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StackingPlan:
    base_edge: Edge
    steps: Tuple[Tuple[Edge, Tuple[int, ...]], ...]

    def replay(self) -> Graph:
        edges = {self.base_edge}
        verts = set(self.base_edge)
        active = {self.base_edge}
        for e, stacked in self.steps:
            if e not in active:
                raise ValidationError(f"step on inactive edge {e}")
            active.discard(e)
            for w in stacked:
                if w in verts:
                    raise ValidationError(f"vertex {w} stacked twice")
                verts.add(w)
                for x in e:
                    ne = _norm_edge(x, w)
                    edges.add(ne)
                    active.add(ne)
        if active:
            raise ValidationError(f"edges never processed: {sorted(active)}")
        return Graph.from_edges(sorted(edges), n=max(verts) + 1)


def two_tree_plan(g: Graph, base: Optional[Edge] = None) -> StackingPlan:
    """Stacking plan grown breadth-first over edges from ``base``.

    The vertices stacked onto an edge are the unplaced common neighbours of
    its endpoints.  ``base`` defaults to the edge left over by peeling.
    """
    peel = two_tree_peeling(g)
    if peel is None:
        raise ClassificationError("graph is not a 2-tree")
    if base is None:
        base = tuple(sorted(set(range(g.n)) - {w for w, _, _ in peel}))
    base = _norm_edge(*base)
    if not g.has_edge(*base):
        raise ValidationError(f"base {base} is not an edge")
    adj = [set(g.neighbors(v)) for v in range(g.n)]
    placed = set(base)
    steps = []
    queue = deque([base])
    while queue:
        e = queue.popleft()
        stacked = tuple(sorted((adj[e[0]] & adj[e[1]]) - placed))
        placed.update(stacked)
        steps.append((e, stacked))
        for w in stacked:
            queue.append(_norm_edge(e[0], w))
            queue.append(_norm_edge(e[1], w))
    return StackingPlan(base, tuple(steps))


# ---------------------------------------------------------------------------
# embeddings
# ---------------------------------------------------------------------------

def _rotation_from_nx(emb: nx.PlanarEmbedding, n: int, drop: Optional[int] = None) -> List[List[int]]:
    rot = []
    for v in range(n):
        # networkx exposes clockwise order; reverse for counterclockwise
        cw = list(emb.neighbors_cw_order(v)) if v in emb else []
        ccw = list(reversed(cw))
        if drop is not None and drop in ccw:
            i = ccw.index(drop)
            ccw = ccw[i + 1:] + ccw[:i]
        rot.append(ccw)
    return rot


def outerplanar_embedding(g: Graph) -> PlaneEmbedding:
    """Embedding with every vertex on the outer face.

    The rotation at each vertex starts right after the outer-face corner,
    i.e. the outer face occupies the sector from ``rotation[v][-1]`` ccw to
    ``rotation[v][0]``.
    """
    ok, emb = nx.check_planarity(_with_apex(g))
    if not ok:
        raise ClassificationError("graph is not outerplanar")
    rot = _rotation_from_nx(emb, g.n, drop=g.n)
    pe = PlaneEmbedding(g, rot)
    pe.outer_face = _outer_face_for_corners(pe)
    return pe


def _outer_face_for_corners(pe: PlaneEmbedding) -> int:
    g = pe.graph
    if g.m == 0:
        return 0
    df = pe.dart_face()
    for v in range(g.n):
        rot = pe.rotation[v]
        if rot:
            # sector from rot[-1] ccw to rot[0] is the dart (v, rot[-1])
            return df[(v, rot[-1])]
    return 0


def planar_embedding(g: Graph, outer: Optional[int] = None) -> PlaneEmbedding:
    """Some planar embedding; outer face defaults to the longest face (lowest index on ties)."""
    ok, emb = nx.check_planarity(g.to_networkx())
    if not ok:
        raise ClassificationError("graph is not planar")
    pe = PlaneEmbedding(g, _rotation_from_nx(emb, g.n))
    if outer is None:
        sizes = [len(f) for f in pe.faces]
        outer = max(range(len(sizes)), key=lambda i: (sizes[i], -i))
    pe.outer_face = outer
    return pe


def rotation_matches(rot_a: Sequence[int], rot_b: Sequence[int]) -> bool:
    """Cyclic equality of two rotation lists."""
    if len(rot_a) != len(rot_b):
        return False
    if not rot_a:
        return True
    try:
        i = list(rot_b).index(rot_a[0])
    except ValueError:
        return False
    return list(rot_b[i:]) + list(rot_b[:i]) == list(rot_a)

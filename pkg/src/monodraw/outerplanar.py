"""Convex strongly monotone drawings of outerplanar graphs.

Every vertex gets two dummy leaves in its outer-face corner, so a spanning
tree that keeps all dummy edges has no vertex of degree two.  That tree is
drawn strictly convex with the inherited rotation, the remaining edges are
inserted as straight segments (each one splits a convex face into two
convex faces) and finally the dummies are dropped.
"""

from __future__ import annotations

import logging
from collections import deque
from typing import Callable, List, Optional, Sequence, Tuple

import networkx as nx

from . import geometry as geo
from .errors import ClassificationError, InvariantError, PrecisionError
from .graph import Edge, Graph, PlaneEmbedding, is_outerplanar, outerplanar_embedding, rotation_matches
from .tree import predicted_log_radius, draw_tree
from .verify import Drawing, face_strictly_convex, realized_embedding

log = logging.getLogger(__name__)

# spanning trees tried before reporting a precision failure
MAX_TREE_TRIES = 8


def augment_with_dummies(emb: PlaneEmbedding, counts: Optional[Sequence[int]] = None
                         ) -> Tuple[PlaneEmbedding, List[Tuple[int, ...]]]:
    """Attach dummy leaves to every vertex inside its outer-face corner.

    ``emb`` must have its outer-face corner at the end of each rotation (as
    produced by :func:`outerplanar_embedding`).  ``counts[v]`` dummies go to
    vertex v (default two each); they are numbered from n upwards in vertex
    order.  Returns the augmented embedding and the dummies of every vertex.
    """
    g = emb.graph
    n = g.n
    counts = [2] * n if counts is None else list(counts)
    dummies: List[Tuple[int, ...]] = []
    nxt = n
    for c in counts:
        dummies.append(tuple(range(nxt, nxt + c)))
        nxt += c
    edges = list(g.edges)
    rot = [list(r) for r in emb.rotation] + [[] for _ in range(nxt - n)]
    for v, ds in enumerate(dummies):
        for d in ds:
            edges.append((v, d))
            rot[v].append(d)
            rot[d] = [v]
    h = Graph.from_edges(edges, n=nxt)
    aug = PlaneEmbedding(h, rot)
    v0 = next((v for v in range(n) if rot[v]), 0)
    if rot[v0]:
        aug.outer_face = aug.dart_face()[(v0, rot[v0][-1])]
    return aug, dummies


def dummy_counts(emb: PlaneEmbedding, t_g: Graph) -> List[int]:
    """Fewest dummies per vertex so that strict convexity survives re-insertion.

    Leaves of the spanning tree get two.  A vertex with two tree edges needs
    one only when the sector between them away from the outer corner holds
    no other edge and is an internal face, which would otherwise keep a
    straight angle.  Every other vertex needs none.
    """
    counts = []
    for v in range(t_g.n):
        deg = t_g.degree(v)
        if deg == 1:
            counts.append(2)
        elif deg == 2:
            rot = emb.rotation[v]
            i, j = sorted(rot.index(u) for u in t_g.neighbors(v))
            internal = emb.face_between(v, rot[i]) != emb.outer_face
            counts.append(1 if j - i == 1 and internal else 0)
        else:
            counts.append(0)
    return counts


def bfs_tree(g: Graph, root: int) -> Graph:
    seen = {root}
    queue = deque([root])
    keep = []
    while queue:
        x = queue.popleft()
        for y in g.neighbors(x):
            if y not in seen:
                seen.add(y)
                keep.append((x, y))
                queue.append(y)
    return Graph.from_edges(keep, n=g.n)


def spanning_tree_respecting_rotation(emb_h: PlaneEmbedding, n_original: int,
                                      root: int = 0) -> Tuple[Graph, List[List[int]]]:
    """BFS tree of the original vertices plus every dummy edge, with the inherited rotation."""
    h = emb_h.graph
    keep = set()
    seen = {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in h.neighbors(x):
            if y < n_original and y not in seen:
                seen.add(y)
                keep.add((min(x, y), max(x, y)))
                queue.append(y)
    keep |= {e for e in h.edges if e[1] >= n_original}
    t = Graph.from_edges(sorted(keep), n=h.n)
    rot = [[u for u in emb_h.rotation[v] if t.has_edge(v, u)] for v in range(h.n)]
    if any(t.degree(v) == 1 for v in range(n_original)):
        raise InvariantError("an original vertex is a leaf of the spanning tree")
    return t, rot


def _face_left_of(emb: PlaneEmbedding, x: int, y: int) -> List[int]:
    return list(emb.faces[emb.face_between(x, y)].vertices)


def reinsert_edges(tree_drawing: Drawing, emb_h: PlaneEmbedding, n_original: int, eps: float = geo.EPS_ANGLE,
                   on_insert: Optional[Callable[[Drawing, Edge], None]] = None) -> Drawing:
    """Insert the edges of H missing from the tree drawing, innermost first.

    Edges are ordered by the length of the tree path between their
    endpoints (ties by edge id), so every bounded face closed by an
    insertion is final.  After each insertion the new edge must cross nothing, the drawing must
    still realise H's rotation at both endpoints and the bounded face it
    closes must be strictly convex.
    """
    h = emb_h.graph
    pos = tree_drawing.pos
    current = tree_drawing.graph
    missing = [e for e in h.edges if not current.has_edge(*e)]
    nxg = current.to_networkx()
    missing.sort(key=lambda e: nx.shortest_path_length(nxg, *e))
    for x, y in missing:
        for a, b in current.edges:
            if geo.segments_intersect(pos[x], pos[y], pos[a], pos[b]):
                raise InvariantError(f"inserted edge {(x, y)} crosses {(a, b)}")
        current = current.add_edges([(x, y)])
        d = Drawing(current, pos)
        emb = realized_embedding(d)
        want = [[u for u in emb_h.rotation[v] if current.has_edge(v, u)] for v in (x, y)]
        if not (rotation_matches(want[0], emb.rotation[x]) and rotation_matches(want[1], emb.rotation[y])):
            raise InvariantError(f"edge {(x, y)} was inserted into the wrong face")
        sides = [_face_left_of(emb, x, y), _face_left_of(emb, y, x)]
        # the side without dummy leaves is the new bounded face
        bounded = [f for f in sides if all(v < n_original for v in f)]
        if not bounded or not face_strictly_convex(d, bounded[0], eps):
            raise InvariantError(f"face closed by edge {(x, y)} is not strictly convex")
        if on_insert:
            on_insert(d, (x, y))
    return Drawing(current, pos)


def draw_outerplanar(g: Graph, eps: float = geo.EPS_ANGLE,
                     on_insert: Optional[Callable[[Drawing, Edge], None]] = None) -> Drawing:
    """Crossing-free strongly monotone drawing with strictly convex internal faces."""
    if g.n < 2 or not g.is_connected():
        raise ClassificationError("expects a connected graph with at least two vertices")
    if not is_outerplanar(g):
        raise ClassificationError("graph is not outerplanar")
    emb = outerplanar_embedding(g)
    # any spanning tree works; rank BFS trees by predicted precision need
    cands = []
    for r in range(g.n):
        emb_h, _ = augment_with_dummies(emb, dummy_counts(emb, bfs_tree(g, r)))
        t, rot = spanning_tree_respecting_rotation(emb_h, g.n, r)
        cands.append((-predicted_log_radius(t, r), r, t, rot, emb_h))
    cands.sort(key=lambda c: c[:2])
    failure = None
    for _, r, t, rot, emb_h in cands[:MAX_TREE_TRIES]:
        try:
            td = draw_tree(t, rotation=rot, root=r, eps=eps)
            break
        except PrecisionError as exc:
            failure = failure or exc
    else:
        raise failure
    full = reinsert_edges(td, emb_h, g.n, eps, on_insert)
    log.info("outerplanar drawing: n=%d, %d edges reinserted", g.n, g.m - (g.n - 1))
    return Drawing(g, full.pos[:g.n])

import math
import random

import pytest

from conftest import brute_slack, dot_monotone, is_valid_path, simple_paths
from monodraw import generators as gen
from monodraw import geometry as geo
from monodraw.errors import UsageError, ValidationError
from monodraw.graph import Graph, embedding_from_positions
from monodraw.verify import (Drawing, NotStronglyMonotone, convex_faces, crossing_free, monotone, safety,
                             strongly_monotone, strongly_monotone_pair, tree_convexity)

P3 = Graph.from_edges([(0, 1), (1, 2)])


def test_drawing_rejects_shared_positions_and_nan():
    with pytest.raises(ValidationError):
        Drawing(P3, [(0, 0), (0, 0), (1, 1)])
    with pytest.raises(ValidationError):
        Drawing(P3, [(0, 0), (float("nan"), 0), (1, 1)])


def test_pair_examples():
    assert strongly_monotone_pair(Drawing(P3, [(0, 0), (1, 0), (2, 0)]), 0, 2) == [0, 1, 2]
    # the second edge points against the pair direction
    d = Drawing(P3, [(0, 0), (2, 0), (1, 1)])
    assert strongly_monotone_pair(d, 0, 2) is None
    with pytest.raises(UsageError):
        strongly_monotone_pair(d, 1, 1)


def test_strongly_monotone_examples():
    star = Graph.from_edges([(0, i) for i in range(1, 5)])
    rnd = random.Random(0)
    pts = [(0.0, 0.0)] + [geo.polar(rnd.uniform(0.5, 2), a) for a in (0.3, 1.9, 3.4, 5.0)]
    assert strongly_monotone(Drawing(star, pts)).ok
    tri = Graph.from_edges([(0, 1), (1, 2), (0, 2)])
    assert strongly_monotone(Drawing(tri, [(0, 0), (1, 0), (0.5, 1)])).ok
    zig = Graph.from_edges([(0, 1), (1, 2), (2, 3)])
    rep = strongly_monotone(Drawing(zig, [(0, 0), (1, 1), (2, 0), (3, 1)]))
    assert rep.ok and rep.per_pair[(0, 3)] == [0, 1, 2, 3]


def test_witnesses_revalidate_on_random_drawings():
    rnd = random.Random(1)
    for _ in range(200):
        n = rnd.randint(2, 8)
        g = gen.random_outerplanar(n, rnd)
        d = Drawing(g, gen.random_points(n, rnd))
        rep = strongly_monotone(d)
        for (u, v), path in rep.per_pair.items():
            if path is not None:
                assert is_valid_path(g, path, u, v) and dot_monotone(d, path)
        if rep.ok:
            assert monotone(d)


def test_monotone_examples():
    bent = Drawing(P3, [(0, 0), (1, 0), (1, 1)])
    assert monotone(bent)
    # a path that doubles back on itself is monotone in no direction
    assert not monotone(Drawing(P3, [(0, 0), (2, 0), (1, 0)]))


def _brute_monotone(d):
    dirs = [geo.polar(1.0, 2 * math.pi * k / 3600 + 1e-4) for k in range(3600)]
    for u in range(d.graph.n):
        for v in range(u + 1, d.graph.n):
            paths = simple_paths(d.graph, u, v)
            if not any(all(geo.dot(d.vec(a, b), t) > 0 for a, b in zip(p, p[1:])) for p in paths for t in dirs):
                return False
    return True


def test_monotone_matches_direction_grid():
    rnd = random.Random(2)
    for _ in range(60):
        n = rnd.randint(2, 6)
        g = gen.random_outerplanar(n, rnd)
        d = Drawing(g, gen.random_points(n, rnd))
        assert monotone(d) == _brute_monotone(d)


def test_safety_examples():
    edge = Graph.from_edges([(0, 1)])
    assert safety(Drawing(edge, [(0, 0), (1, 0)])) == pytest.approx(math.pi / 2)
    assert safety(Drawing(P3, [(0, 0), (1, 0), (2, 0)])) == pytest.approx(math.pi / 2)
    zig = Drawing(Graph.from_edges([(0, 1), (1, 2), (2, 3)]), [(0, 0), (1, 1), (2, 0), (3, 1)])
    want = min(brute_slack(zig, u, v) for u in range(4) for v in range(u + 1, 4))
    assert safety(zig) == pytest.approx(want, abs=1e-12)
    with pytest.raises(NotStronglyMonotone):
        safety(Drawing(P3, [(0, 0), (2, 0), (1, 1)]))


def test_safety_never_drops_when_an_edge_is_added():
    rnd = random.Random(3)
    checked = 0
    while checked < 200:
        n = rnd.randint(3, 7)
        g = gen.random_tree(n, rnd)
        d = Drawing(g, gen.random_points(n, rnd))
        if not strongly_monotone(d).ok:
            continue
        missing = [(a, b) for a in range(n) for b in range(a + 1, n) if not g.has_edge(a, b)]
        if not missing:
            continue
        d2 = Drawing(g.add_edges([rnd.choice(missing)]), d.pos)
        assert safety(d2) >= safety(d) - 1e-15
        checked += 1


def test_crossing_free_examples():
    k4 = gen.k4()
    assert crossing_free(Drawing(k4, [(0, 0), (4, 0), (2, 3), (2, 1)]))[0]
    ok, pair = crossing_free(Drawing(k4, [(0, 0), (1, 0), (1, 1), (0, 1)]))
    assert not ok and pair is not None


def test_crossing_free_detects_overlap_and_vertex_on_edge():
    g = Graph.from_edges([(0, 1), (2, 3)])
    assert not crossing_free(Drawing(g, [(0, 0), (2, 0), (1, 0), (3, 0)]))[0]
    # vertex 2 lies in the interior of edge (0,1)
    g2 = Graph.from_edges([(0, 1), (2, 3)])
    assert not crossing_free(Drawing(g2, [(0, 0), (2, 0), (1, 0), (1, 1)]))[0]


def test_tree_convexity_examples():
    k13 = Graph.from_edges([(0, 1), (0, 2), (0, 3)])
    pts = [(0.0, 0.0)] + [geo.polar(1.0, 2 * math.pi * k / 3) for k in range(3)]
    assert tree_convexity(Drawing(k13, pts)) == "strictlyConvex"
    assert tree_convexity(Drawing(P3, [(0, 0), (1, 0), (2, 0)])) == "convex"
    t_shape = Graph.from_edges([(0, 1), (0, 2), (0, 3)])
    # all three neighbours in a half-plane leave a reflex angle at the centre
    assert tree_convexity(Drawing(t_shape, [(0, 0), (1, 0.2), (0, 1), (-1, 0.2)])) == "notConvex"
    with pytest.raises(UsageError):
        tree_convexity(Drawing(gen.k4(), [(0, 0), (1, 0), (0, 1), (1, 1)]))


def test_convex_faces_examples():
    tri = Graph.from_edges([(0, 1), (1, 2), (0, 2)])
    d = Drawing(tri, [(0, 0), (1, 0), (0, 1)])
    assert convex_faces(d, embedding_from_positions(tri, d.pos))
    quad = Graph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    d = Drawing(quad, [(0, 0), (2, 0), (2, 2), (0, 2)])
    assert convex_faces(d, embedding_from_positions(quad, d.pos))
    d = Drawing(quad, [(0, 0), (2, 0), (0.5, 0.5), (0, 2)])
    assert not convex_faces(d, embedding_from_positions(quad, d.pos))
    k4 = gen.k4()
    mirrored = embedding_from_positions(k4, [(0, 0), (-4, 0), (-2, 3), (-2, 1)])
    with pytest.raises(ValidationError):
        convex_faces(Drawing(k4, [(0, 0), (4, 0), (2, 3), (2, 1)]), mirrored)

import math
import random

import pytest

from conftest import dot_monotone
from monodraw import generators as gen
from monodraw import geometry as geo
from monodraw.errors import UsageError
from monodraw.graph import Graph, rotation_matches
from monodraw.tree import (check_invariants, draw_tree, expand_leaf, initial_state, leaf_cone,
                           visibility_cone)
from monodraw.verify import crossing_free, realized_embedding, strongly_monotone, tree_convexity


def star(k):
    return Graph.from_edges([(0, i) for i in range(1, k + 1)])


def irreducible_tree(n_internal, rnd):
    """Grow a tree by giving a random leaf two or three children."""
    edges = [(0, 1), (0, 2), (0, 3)]
    leaves = [1, 2, 3]
    nxt = 4
    for _ in range(n_internal):
        a = leaves.pop(rnd.randrange(len(leaves)))
        for _ in range(rnd.choice((2, 3))):
            edges.append((a, nxt))
            leaves.append(nxt)
            nxt += 1
    return Graph.from_edges(edges)


def test_star_children_form_regular_polygon():
    d = draw_tree(star(4), root=0)
    angles = sorted(geo.direction(d.vec(0, i)) % (2 * math.pi) for i in range(1, 5))
    gaps = [b - a for a, b in zip(angles, angles[1:])]
    assert gaps == pytest.approx([math.pi / 2] * 3)
    assert tree_convexity(d) == "strictlyConvex"


def test_path_on_three_vertices_is_collinear():
    d = draw_tree(Graph.from_edges([(0, 1), (1, 2)]), root=1)
    assert geo.orientation(d.pos[0], d.pos[1], d.pos[2]) == 0
    assert tree_convexity(d) == "convex"


def test_tiny_trees_and_non_trees():
    assert list(draw_tree(Graph(1, ())).pos) == [(0.0, 0.0)]
    assert len(draw_tree(Graph.from_edges([(0, 1)])).pos) == 2
    with pytest.raises(UsageError):
        draw_tree(Graph.from_edges([(0, 1), (1, 2), (0, 2)]))
    with pytest.raises(UsageError):
        draw_tree(star(3), root=1)


def test_leaf_cones_of_symmetric_stars():
    for k, sweep in ((3, 2 * math.pi / 3), (4, math.pi / 2)):
        state = initial_state(star(k), 0)
        for a in state.hull_leaves:
            cone = leaf_cone(state, a)
            assert cone.sweep == pytest.approx(sweep)
            # the prolongation is the bisector
            assert geo.angle_between(cone.bisector(), state.pos[a]) == pytest.approx(0.0, abs=1e-12)


def test_visibility_cone_of_single_edge_is_half_plane():
    state = initial_state(star(3), 0)
    cone = visibility_cone(state, 0, 1)
    assert cone.sweep == pytest.approx(math.pi)
    assert cone.contains((1.0, 5.0)) and not cone.contains((-0.1, 5.0))


def test_visibility_cone_sampling():
    rnd = random.Random(11)
    for _ in range(10):
        t = gen.random_tree(rnd.randint(6, 15), rnd)
        snap = []
        draw_tree(t, on_step=snap.append)
        s = snap[-1]
        for a in s.hull_leaves[:3]:
            for y in rnd.sample(s.drawn(), min(4, len(s.drawn()))):
                if y == a:
                    continue
                cone = visibility_cone(s, y, a)
                path = s.path_to(y, a)
                for _ in range(1000):
                    p = geo.add(s.pos[y], geo.polar(rnd.uniform(0.01, 10.0),
                                                    geo.direction(cone.lo) + rnd.uniform(1e-6, 1 - 1e-6) * cone.sweep))
                    direction = geo.sub(p, s.pos[y])
                    assert all(geo.dot(geo.sub(s.pos[z], s.pos[x]), direction) > 0 for x, z in zip(path, path[1:]))


def test_single_child_continues_the_parent_edge():
    state = initial_state(star(3), 0)
    expand_leaf(state, 1, [4])
    assert geo.angle_between(geo.sub(state.pos[1], state.pos[0]), geo.sub(state.pos[4], state.pos[1])) < 1e-12


@pytest.mark.parametrize("k", [2, 3, 5])
def test_children_straddle_the_prolongation_inside_the_leaf_cone(k):
    state = initial_state(star(3), 0)
    cone = leaf_cone(state, 2)
    kids = list(range(4, 4 + k))
    expand_leaf(state, 2, kids)
    prol = geo.sub(state.pos[2], state.pos[0])
    first, last = (geo.sub(state.pos[c], state.pos[2]) for c in (kids[0], kids[-1]))
    assert geo.cross(prol, first) < 0 < geo.cross(prol, last)
    assert all(cone.contains(state.pos[c]) for c in kids)
    turns = [geo.direction(geo.sub(state.pos[c], state.pos[2])) for c in kids]
    assert all(geo.ccw_angle(geo.polar(1, a), geo.polar(1, b)) < math.pi for a, b in zip(turns, turns[1:]))


def test_invariants_hold_after_every_expansion():
    rnd = random.Random(12)
    for _ in range(25):
        t = gen.random_tree(rnd.randint(3, 25), rnd)
        results = []
        draw_tree(t, on_step=lambda s: results.append(check_invariants(s)))
        assert results and all(all(r.values()) for r in results), results


def test_prescribed_rotation_is_realised():
    rnd = random.Random(13)
    for _ in range(40):
        t = gen.random_tree(rnd.randint(3, 20), rnd)
        rot = [rnd.sample(list(t.neighbors(v)), t.degree(v)) for v in range(t.n)]
        d = draw_tree(t, rotation=rot)
        got = realized_embedding(d).rotation
        assert all(rotation_matches(rot[v], got[v]) for v in range(t.n))


def test_random_trees_pass_the_verifier():
    rnd = random.Random(14)
    for _ in range(30):
        t = gen.random_tree(rnd.randint(3, 30), rnd)
        d = draw_tree(t)
        rep = strongly_monotone(d)
        assert rep.ok and crossing_free(d)[0]
        assert tree_convexity(d) in ("convex", "strictlyConvex")
        for path in rep.per_pair.values():
            assert dot_monotone(d, path)


def test_irreducible_trees_are_strictly_convex():
    rnd = random.Random(15)
    for _ in range(20):
        t = irreducible_tree(rnd.randint(1, 8), rnd)
        assert all(t.degree(v) != 2 for v in range(t.n))
        assert tree_convexity(draw_tree(t)) == "strictlyConvex"

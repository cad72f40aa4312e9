import random

import pytest

from monodraw import generators as gen
from monodraw.errors import ClassificationError
from monodraw.graph import Graph, faces_of, outerplanar_embedding
from monodraw.outerplanar import augment_with_dummies, draw_outerplanar, spanning_tree_respecting_rotation
from monodraw.verify import (convex_faces, crossing_free, face_strictly_convex, realized_embedding,
                             strongly_monotone)

C3 = Graph.from_edges([(0, 1), (1, 2), (0, 2)])


def test_single_edge_and_triangle():
    d = draw_outerplanar(Graph.from_edges([(0, 1)]))
    assert len(d.pos) == 2 and strongly_monotone(d).ok
    d = draw_outerplanar(C3)
    assert strongly_monotone(d).ok
    assert convex_faces(d, realized_embedding(d))


def test_rejects_non_outerplanar_and_disconnected():
    with pytest.raises(ClassificationError):
        draw_outerplanar(gen.k4())
    with pytest.raises(ClassificationError):
        draw_outerplanar(Graph(3, ((0, 1),)))


def test_augment_single_edge_gives_double_star():
    aug, dummies = augment_with_dummies(outerplanar_embedding(Graph.from_edges([(0, 1)])))
    assert aug.graph.n == 6 and aug.graph.m == 5
    assert sorted(aug.graph.degree(v) for v in range(6)) == [1, 1, 1, 1, 3, 3]
    assert dummies == [(2, 3), (4, 5)]
    t, _ = spanning_tree_respecting_rotation(aug, 2)
    assert set(t.edges) == set(aug.graph.edges)


def test_augment_triangle():
    aug, _ = augment_with_dummies(outerplanar_embedding(C3))
    assert aug.graph.n == 9 and all(aug.graph.degree(v) == 4 for v in range(3))
    t, rot = spanning_tree_respecting_rotation(aug, 3)
    assert t.m == 8 and sum(1 for e in C3.edges if t.has_edge(*e)) == 2
    assert all(t.degree(v) != 2 for v in range(9))


def test_dummies_sit_consecutively_in_the_outer_corner():
    rnd = random.Random(21)
    for _ in range(60):
        g = gen.random_outerplanar(rnd.randint(2, 15), rnd)
        emb = outerplanar_embedding(g)
        aug, dummies = augment_with_dummies(emb)
        h = aug.graph
        assert all(h.degree(v) != 2 for v in range(h.n))
        for v, ds in enumerate(dummies):
            rot = aug.rotation[v]
            i = rot.index(ds[0])
            assert [rot[(i + j) % len(rot)] for j in range(len(ds))] == list(ds)
        # internal faces are untouched by the dummies
        outer = emb.faces[emb.outer_face]
        inner = sorted(sorted(f.vertices) for f in emb.faces if f is not outer)
        inner_aug = sorted(sorted(f.vertices) for i, f in enumerate(aug.faces) if i != aug.outer_face)
        assert inner == inner_aug
        t, _ = spanning_tree_respecting_rotation(aug, g.n)
        assert all(t.degree(v) != 2 for v in range(h.n))


def test_every_insertion_closes_a_strictly_convex_face():
    rnd = random.Random(22)
    for _ in range(30):
        g = gen.random_outerplanar(rnd.randint(3, 18), rnd)
        steps = []

        def check(d, edge):
            assert crossing_free(d)[0]
            faces, _ = faces_of(realized_embedding(d))
            # faces free of dummy vertices are the bounded faces closed so far
            closed = [f.vertices for f in faces if all(v < g.n for v in f.vertices)]
            assert closed and all(face_strictly_convex(d, f) for f in closed)
            steps.append(edge)

        d = draw_outerplanar(g, on_insert=check)
        assert len(steps) == g.m - (g.n - 1)
        assert crossing_free(d)[0] and strongly_monotone(d).ok
        emb = realized_embedding(d)
        assert all(face_strictly_convex(d, f.vertices) for i, f in enumerate(emb.faces) if i != emb.outer_face)


def test_random_maximal_outerplanar_graphs():
    rnd = random.Random(23)
    for _ in range(15):
        g = gen.random_maximal_outerplanar(rnd.randint(3, 20), rnd)
        d = draw_outerplanar(g)
        assert strongly_monotone(d).ok and crossing_free(d)[0]
        assert convex_faces(d, realized_embedding(d))

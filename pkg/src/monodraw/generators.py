"""Seeded random instance generators for tests, acceptance runs and reports."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, List

import networkx as nx
import numpy as np

from .graph import Graph


def random_tree(n: int, rng: random.Random) -> Graph:
    """Uniform labelled tree via a random Pruefer sequence."""
    if n <= 1:
        return Graph(max(n, 0), ())
    if n == 2:
        return Graph(2, ((0, 1),))
    seq = [rng.randrange(n) for _ in range(n - 2)]
    return Graph.from_edges(nx.from_prufer_sequence(seq).edges(), n=n)


def random_two_tree(n: int, rng: random.Random) -> Graph:
    """Start from an edge and stack each new vertex on a uniformly chosen edge."""
    edges = [(0, 1)]
    for w in range(2, n):
        a, b = edges[rng.randrange(len(edges))]
        edges += [(a, w), (b, w)]
    return Graph.from_edges(edges, n=max(n, 2))


def random_maximal_outerplanar(n: int, rng: random.Random) -> Graph:
    """Random triangulation of a convex n-gon (n >= 3)."""
    edges = {(i, (i + 1) % n) for i in range(n)}

    def split(poly):
        if len(poly) <= 3:
            return
        while True:
            i, j = sorted(rng.sample(range(len(poly)), 2))
            if j - i >= 2 and not (i == 0 and j == len(poly) - 1):
                break
        edges.add((poly[i], poly[j]))
        split(poly[i:j + 1])
        split(poly[j:] + poly[:i + 1])

    split(list(range(n)))
    return Graph.from_edges(edges, n=n)


def random_outerplanar(n: int, rng: random.Random) -> Graph:
    """Connected outerplanar graph: random maximal outerplanar minus random edges.

    Edges are removed while the graph stays connected, with probability 1/2
    each, so instances range from trees to triangulated polygons.
    """
    if n <= 2:
        return Graph(n, ((0, 1),) if n == 2 else ())
    g = random_maximal_outerplanar(n, rng).to_networkx()
    for e in sorted(g.edges()):
        if rng.random() < 0.5:
            g.remove_edge(*e)
            if not nx.is_connected(g):
                g.add_edge(*e)
    return Graph.from_edges(g.edges(), n=n)


def random_planar_triangulation(n: int, rng: random.Random) -> Graph:
    """Delaunay triangulation of random points plus a cone to an apex.

    Adding the apex over the convex hull makes the graph a triangulation of
    the sphere, hence 3-connected for n >= 4.
    """
    from scipy.spatial import Delaunay

    while True:
        pts = np.array([[rng.random(), rng.random()] for _ in range(n - 1)])
        tri = Delaunay(pts)
        edges = set()
        for s in tri.simplices:
            for a, b in itertools.combinations(sorted(int(x) for x in s), 2):
                edges.add((a, b))
        hull = {int(v) for v in tri.convex_hull.ravel()}
        edges |= {(v, n - 1) for v in hull}
        g = Graph.from_edges(edges, n=n)
        if g.m == 3 * n - 6:
            return g


def connected_graphs(n: int) -> List[Graph]:
    """One representative per isomorphism class of connected graphs on n vertices."""
    if n == 1:
        return [Graph(1, ())]
    reps: List[nx.Graph] = []
    by_key = {}
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        es = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        if len(es) < n - 1:
            continue
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from(es)
        if not nx.is_connected(g):
            continue
        key = (len(es), tuple(sorted(d for _, d in g.degree())))
        bucket = by_key.setdefault(key, [])
        if any(nx.is_isomorphic(g, h) for h in bucket):
            continue
        bucket.append(g)
        reps.append(g)
    return [Graph.from_edges(g.edges(), n=n) for g in reps]


def all_connected_graphs(max_n: int) -> Iterator[Graph]:
    for n in range(1, max_n + 1):
        yield from connected_graphs(n)


def random_points(n: int, rng: random.Random) -> List[tuple]:
    return [(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(n)]


# named small instances

def wheel(k: int) -> Graph:
    """Hub 0 joined to a rim cycle 1..k."""
    rim = [(i, i % k + 1) for i in range(1, k + 1)]
    return Graph.from_edges(rim + [(0, i) for i in range(1, k + 1)], n=k + 1)


def prism(k: int = 3) -> Graph:
    top = [(i, (i + 1) % k) for i in range(k)]
    bot = [(k + i, k + (i + 1) % k) for i in range(k)]
    return Graph.from_edges(top + bot + [(i, k + i) for i in range(k)], n=2 * k)


def octahedron() -> Graph:
    return Graph.from_edges(nx.octahedral_graph().edges(), n=6)


def k4() -> Graph:
    return Graph.from_edges(itertools.combinations(range(4), 2), n=4)


def cube() -> Graph:
    g = nx.convert_node_labels_to_integers(nx.hypercube_graph(3), ordering="sorted")
    return Graph.from_edges(g.edges(), n=8)


def antiprism(k: int) -> Graph:
    es = []
    for i in range(k):
        es += [(i, (i + 1) % k), (k + i, k + (i + 1) % k), (i, k + i), (i, k + (i + 1) % k)]
    return Graph.from_edges(es, n=2 * k)

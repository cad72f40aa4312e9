"""Primal-dual circle packings of 3-connected plane graphs and their witness paths.

Every incident pair (vertex v, bounded face f) is a kite with two right
angles at the contact points of the face's edges at v; its angle at the
vertex is 2 atan(r_f / r_v), at the face centre 2 atan(r_v / r_f).  The
radii solve the angle sums:

* interior vertex: kite angles sum to 2 pi;
* outer vertex: kite angles sum to the angle 2 atan(1 / r_v) that the outer
  circle's kite leaves at v;
* bounded face: kite angles sum to 2 pi;
* outer face: the outer kites sum to 2 pi around the centre of C_o.

C_o is the unit circle at the origin.  That still leaves the disk
automorphisms free, so Gauss-Newton steps are minimum-norm least-squares
steps; started from equal radii they keep every symmetry of the input.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import geometry as geo
from .errors import ClassificationError, ConvergenceError, PrecisionError
from .graph import Edge, Graph, PlaneEmbedding, _norm_edge, is_planar, is_three_connected, planar_embedding
from .verify import Drawing

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
MAX_NEWTON = 200
POLISH_STEPS = 2
# a point is "on" the segment when closer than this many tolerances
DEGENERACY_FACTOR = 1e3


@dataclass
class PrimalDualPacking:
    embedding: PlaneEmbedding
    vertex_circles: List[geo.Circle]
    face_circles: Dict[int, geo.Circle]
    outer_circle: geo.Circle
    contact_points: Dict[Edge, geo.Point]
    tol: float = DEFAULT_TOL
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def graph(self) -> Graph:
        return self.embedding.graph

    @property
    def outer_face(self) -> int:
        return self.embedding.outer_face

    def center(self, v: int) -> geo.Point:
        return self.vertex_circles[v].center


# ---------------------------------------------------------------------------
# radii
# ---------------------------------------------------------------------------

@dataclass
class _System:
    n: int
    bounded: List[int]              # face ids in unknown order
    inc_v: np.ndarray               # incident (vertex, bounded-face-slot) pairs
    inc_f: np.ndarray
    outer_vertices: np.ndarray
    is_outer: np.ndarray
    outer_cycle: np.ndarray         # outer vertices in ccw order

    @property
    def size(self) -> int:
        return self.n + len(self.bounded)


def _system(emb: PlaneEmbedding) -> _System:
    faces = emb.faces
    bounded = [i for i in range(len(faces)) if i != emb.outer_face]
    slot = {f: emb.graph.n + j for j, f in enumerate(bounded)}
    iv, jf = [], []
    for f in bounded:
        for v in faces[f].vertices:
            iv.append(v)
            jf.append(slot[f])
    outer = np.array(sorted(set(faces[emb.outer_face].vertices)), dtype=int)
    is_outer = np.zeros(emb.graph.n, dtype=bool)
    is_outer[outer] = True
    cycle = np.array(_outer_cycle_ccw(emb), dtype=int)
    return _System(emb.graph.n, bounded, np.array(iv), np.array(jf), outer, is_outer, cycle)


def _residual(sys_: _System, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Residuals and Jacobian in log radii.

    Rows: vertex angle sums, face angle sums, the outer circle radius, and
    two gauge rows.
    """
    n, m = sys_.n, sys_.size
    r = np.exp(x)
    q = r[sys_.inc_f] / r[sys_.inc_v]
    at_v = np.arctan(q)
    dq = q / (1.0 + q * q)         # d atan(q) / d log q
    F = np.zeros(m + 3)
    J = np.zeros((m + 3, m))
    # vertex rows
    np.add.at(F, sys_.inc_v, at_v)
    np.add.at(J, (sys_.inc_v, sys_.inc_f), dq)
    np.add.at(J, (sys_.inc_v, sys_.inc_v), -dq)
    inner = ~sys_.is_outer
    F[:n][inner] -= math.pi
    ov = sys_.outer_vertices
    t = 1.0 / r[ov]
    F[ov] -= np.arctan(t)
    J[ov, ov] += t / (1.0 + t * t)
    # face rows: atan(r_v / r_f) = pi/2 - atan(q)
    np.add.at(F, sys_.inc_f, 0.5 * math.pi - at_v)
    np.add.at(J, (sys_.inc_f, sys_.inc_v), dq)
    np.add.at(J, (sys_.inc_f, sys_.inc_f), -dq)
    F[n:m] -= math.pi
    # outer face row with R_o = 1
    ro = r[ov]
    F[m] = np.arctan(ro).sum() - math.pi
    J[m, ov] = ro / (1.0 + ro * ro)
    # Disk automorphisms leave every angle sum intact.  Pin them by asking the
    # points where consecutive outer vertex circles touch on the unit circle to
    # average to the origin; this is equivariant, so symmetric inputs keep
    # their symmetry, and unique for three or more points.
    cyc = sys_.outer_cycle
    rc = r[cyc]
    arc = 2.0 * np.arctan(rc)
    phi = np.concatenate([[0.0], np.cumsum(arc)[:-1]])
    c, s = np.cos(phi), np.sin(phi)
    F[m + 1], F[m + 2] = c.sum(), s.sum()
    darc = 2.0 * rc / (1.0 + rc * rc)
    # phi_i depends on the arcs before i
    tail_c = np.concatenate([np.cumsum(c[::-1])[::-1][1:], [0.0]])
    tail_s = np.concatenate([np.cumsum(s[::-1])[::-1][1:], [0.0]])
    J[m + 1, cyc] = -tail_s * darc
    J[m + 2, cyc] = tail_c * darc
    return F, J


def solve_radii(emb: PlaneEmbedding, tol: float = DEFAULT_TOL, max_iter: int = MAX_NEWTON
                ) -> Tuple[np.ndarray, Dict[int, float], float]:
    """Vertex radii, bounded-face radii and the final max angle residual."""
    sys_ = _system(emb)
    x = np.zeros(sys_.size)
    F, J = _residual(sys_, x)
    norm = float(np.abs(F).max())
    trace = [norm]
    for _ in range(max_iter):
        if norm < tol:
            break
        step = np.linalg.lstsq(J, -F, rcond=None)[0]
        lam = 1.0
        while lam > 1e-10:
            F2, J2 = _residual(sys_, x + lam * step)
            n2 = float(np.abs(F2).max())
            if n2 < norm:
                break
            lam *= 0.5
        else:
            raise ConvergenceError(f"line search stalled at residual {norm:.3e}", trace)
        x, F, J, norm = x + lam * step, F2, J2, n2
        trace.append(norm)
    else:
        raise ConvergenceError(f"no convergence after {max_iter} Newton steps (residual {norm:.3e})", trace)
    # quadratic convergence: a couple more steps reach rounding level
    for _ in range(POLISH_STEPS):
        x2 = x + np.linalg.lstsq(J, -F, rcond=None)[0]
        F2, J2 = _residual(sys_, x2)
        n2 = float(np.abs(F2).max())
        if not n2 < norm:
            break
        x, F, J, norm = x2, F2, J2, n2
    angle = float(np.abs(F[:sys_.size + 1]).max())
    r = np.exp(x)
    faces = {f: float(r[sys_.n + j]) for j, f in enumerate(sys_.bounded)}
    log.debug("packing radii: %d Newton steps, residual %.2e", len(trace) - 1, norm)
    return r[:sys_.n], faces, angle


# ---------------------------------------------------------------------------
# layout
# ---------------------------------------------------------------------------

def _outer_cycle_ccw(emb: PlaneEmbedding) -> List[int]:
    # the outer face is traced with the face on the left, i.e. clockwise
    cyc = list(reversed(emb.faces[emb.outer_face].vertices))
    k = cyc.index(min(cyc))
    return cyc[k:] + cyc[:k]


def _layout(emb: PlaneEmbedding, rv: np.ndarray, rf: Dict[int, float]):
    """Centres of all circles by kite chains; returns (vertex pos, face pos, chain discrepancy)."""
    g = emb.graph
    outer = emb.outer_face
    cyc = _outer_cycle_ccw(emb)
    pos: Dict[int, np.ndarray] = {}
    # contact point of edge (cyc[-1], cyc[0]) sits on the positive x-axis
    phi = 0.0
    for v in cyc:
        a = math.atan(rv[v])
        d = math.sqrt(1.0 + rv[v] ** 2)
        pos[v] = np.array([d * math.cos(phi + a), d * math.sin(phi + a)])
        phi += 2.0 * a
    fpos: Dict[int, np.ndarray] = {}
    worst = 0.0
    df = emb.dart_face()

    def note(store, key, p):
        nonlocal worst
        if key in store:
            worst = max(worst, float(np.linalg.norm(store[key] - p)))
        else:
            store[key] = p

    # each queue entry: vertex and a neighbour whose direction is known
    queue = deque()
    for v in cyc:
        rot = emb.rotation[v]
        start = next(x for x in rot if df[(v, emb.pred(v, x))] == outer)
        queue.append((v, start))
    done = set()
    while queue:
        v, x = queue.popleft()
        if v in done:
            continue
        done.add(v)
        theta = geo.direction(tuple(pos[x] - pos[v]))
        y = x
        for _ in range(len(emb.rotation[v])):
            u = pos[v] + (rv[v] + rv[y]) * np.array([math.cos(theta), math.sin(theta)])
            note(pos, y, u)
            if y not in done:
                queue.append((y, v))
            f = df[(v, y)]
            if f == outer:
                break
            half = math.atan(rf[f] / rv[v])
            c = pos[v] + math.hypot(rv[v], rf[f]) * np.array([math.cos(theta + half), math.sin(theta + half)])
            note(fpos, f, c)
            theta += 2.0 * half
            y = emb.succ(v, y)
    if len(pos) != g.n or len(fpos) != len(emb.faces) - 1:
        raise PrecisionError("kite layout did not reach every circle")
    return pos, fpos, worst


def _audit(emb: PlaneEmbedding, vc: List[geo.Circle], fc: Dict[int, geo.Circle],
           contacts: Dict[Edge, geo.Point]) -> Dict[str, float]:
    g = emb.graph
    outer = emb.outer_face
    df = emb.dart_face()
    tang_v = tang_f = ortho = inscribed = 0.0
    for a, b in g.edges:
        ca, cb = vc[a], vc[b]
        tang_v = max(tang_v, abs(geo.dist(ca.center, cb.center) - ca.radius - cb.radius))
        f, h = df[(a, b)], df[(b, a)]
        pe = contacts[(a, b)]
        if outer in (f, h):
            inner = fc[h if f == outer else f]
            tang_f = max(tang_f, abs(geo.norm(inner.center) + inner.radius - 1.0))
            dual = geo.sub(pe, inner.center)
        else:
            tang_f = max(tang_f, abs(geo.dist(fc[f].center, fc[h].center) - fc[f].radius - fc[h].radius))
            dual = geo.sub(fc[h].center, fc[f].center)
        ortho = max(ortho, abs(geo.angle_between(geo.sub(cb.center, ca.center), dual) - geo.HALF_PI))
        for k in (f, h):
            if k != outer:
                dline = abs(geo.point_line_signed(fc[k].center, ca.center, cb.center))
                inscribed = max(inscribed, abs(dline - fc[k].radius))
    return {"tangency_vertex": tang_v, "tangency_face": tang_f, "orthogonality": ortho, "inscribed": inscribed}


def compute_packing(emb: PlaneEmbedding, tol: float = DEFAULT_TOL, max_iter: int = MAX_NEWTON) -> PrimalDualPacking:
    """Primal-dual circle packing with the outer face circle fixed to the unit circle."""
    g = emb.graph
    if not (is_planar(g) and is_three_connected(g)):
        raise ClassificationError("circle packing needs a 3-connected planar graph")
    rv, rf, angle_res = solve_radii(emb, tol, max_iter)
    pos, fpos, chain = _layout(emb, rv, rf)
    vc = [geo.Circle(tuple(pos[v]), float(rv[v])) for v in range(g.n)]
    fc = {f: geo.Circle(tuple(fpos[f]), rf[f]) for f in sorted(fpos)}
    contacts = {}
    for a, b in g.edges:
        pa, pb = np.asarray(vc[a].center), np.asarray(vc[b].center)
        contacts[(a, b)] = tuple((rv[b] * pa + rv[a] * pb) / (rv[a] + rv[b]))
    res = {"angle": angle_res, "layout": chain}
    res.update(_audit(emb, vc, fc, contacts))
    log.info("packing n=%d residuals %s", g.n, {k: f"{v:.1e}" for k, v in res.items()})
    return PrimalDualPacking(emb, vc, fc, geo.Circle((0.0, 0.0), 1.0), contacts, tol, res)


def pack_graph(g: Graph, tol: float = DEFAULT_TOL) -> PrimalDualPacking:
    if not (is_planar(g) and is_three_connected(g)):
        raise ClassificationError("circle packing needs a 3-connected planar graph")
    return compute_packing(planar_embedding(g), tol)


def drawing_from_packing(p: PrimalDualPacking) -> Drawing:
    return Drawing(p.graph, [c.center for c in p.vertex_circles])


# ---------------------------------------------------------------------------
# partition and witness paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Crossing:
    """One step of the region sequence along the segment: a vertex region or a face disk."""

    kind: str        # "vertex" or "face"
    index: int
    enter: float     # segment parameters in [0, 1]
    leave: float


class RegionPartition:
    """Face disks, vertex regions (vertex disk minus face disks) and the outer rest."""

    def __init__(self, packing: PrimalDualPacking):
        self.packing = packing
        self.faces = sorted(packing.face_circles)
        self._vc = np.array([c.center for c in packing.vertex_circles])
        self._vr = np.array([c.radius for c in packing.vertex_circles])
        self._fc = np.array([packing.face_circles[f].center for f in self.faces]).reshape(-1, 2)
        self._fr = np.array([packing.face_circles[f].radius for f in self.faces])
        self.threshold = DEGENERACY_FACTOR * packing.tol * packing.outer_circle.radius

    def locate(self, p: geo.Point) -> Tuple[str, int]:
        """Region containing p: ("face", f), ("vertex", v) or ("outer", -1)."""
        q = np.asarray(p, dtype=float)
        inside_f = np.linalg.norm(self._fc - q, axis=1) < self._fr
        if inside_f.any():
            return "face", self.faces[int(np.argmax(inside_f))]
        inside_v = np.linalg.norm(self._vc - q, axis=1) < self._vr
        if inside_v.any():
            return "vertex", int(np.argmax(inside_v))
        return "outer", -1

    @staticmethod
    def _chords(a: np.ndarray, d: np.ndarray, centers: np.ndarray, radii: np.ndarray, thr: float):
        """Parameter intervals of the segment a + t d inside each disk, plus signed heights of the centres."""
        L = float(np.linalg.norm(d))
        u = d / L
        nrm = np.array([-u[1], u[0]])
        rel = centers - a
        s = rel @ u
        h = rel @ nrm
        half = np.sqrt(np.maximum(radii ** 2 - h ** 2, 0.0))
        return (s - half) / L, (s + half) / L, h, np.abs(h) < radii

    def sequence(self, u: int, v: int) -> Tuple[List[Crossing], List[str]]:
        """Regions met by the segment from p_u to p_v, with the edge-point rules applied.

        Assumes no vertex centre lies on the open segment.  Where two face
        disks touch on the segment, the vertex region above it is inserted;
        where two vertex regions meet, the face disk above it is inserted.
        """
        p = self.packing
        a = np.asarray(p.center(u))
        d = np.asarray(p.center(v)) - a
        L = float(np.linalg.norm(d))
        tthr = self.threshold / L
        notes: List[str] = []
        f_in, f_out, f_h, f_hit = self._chords(a, d, self._fc, self._fr, self.threshold)
        faces = [(max(f_in[i], 0.0), min(f_out[i], 1.0), self.faces[i]) for i in range(len(self.faces))
                 if f_hit[i] and f_out[i] > tthr and f_in[i] < 1.0 - tthr and f_out[i] - f_in[i] > tthr]
        faces.sort()
        v_in, v_out, v_h, v_hit = self._chords(a, d, self._vc, self._vr, self.threshold)
        gaps = []
        cursor = 0.0
        for lo, hi, f in faces:
            gaps.append((cursor, lo))
            cursor = hi
        gaps.append((cursor, 1.0))
        seq: List[Crossing] = []
        for gi, (lo, hi) in enumerate(gaps):
            if hi - lo <= tthr:
                # two face disks touch on the segment: take the vertex region above
                f, g = faces[gi - 1][2], faces[gi][2]
                e = self._shared_edge(f, g)
                side = self._contact_side(e, a, d, notes)
                x = max(e, key=lambda w: side * v_h[w])
                seq.append(Crossing("vertex", x, lo, hi))
            else:
                inside = [w for w in range(len(self._vr)) if v_hit[w]
                          and min(v_out[w], hi) - max(v_in[w], lo) > tthr]
                inside.sort(key=lambda w: v_in[w])
                if not inside:
                    raise PrecisionError(f"segment {u}-{v} leaves the packing between {lo:.6g} and {hi:.6g}")
                for j, w in enumerate(inside):
                    if j:
                        # two vertex regions meet at an edge point: take the face disk above
                        prev = inside[j - 1]
                        e = _norm_edge(prev, w)
                        if not p.graph.has_edge(*e):
                            raise PrecisionError(f"vertex regions {prev},{w} meet without an edge")
                        side = self._contact_side(e, a, d, notes)
                        f = self._face_on_side(e, a, d, side)
                        seq.append(Crossing("face", f, v_out[prev], v_out[prev]))
                    seq.append(Crossing("vertex", w, max(v_in[w], lo), min(v_out[w], hi)))
            if gi < len(faces):
                flo, fhi, f = faces[gi]
                seq.append(Crossing("face", f, flo, fhi))
        for c in seq:
            if c.kind == "face" and abs(self._height(c.index, a, d)) < self.threshold:
                notes.append(f"face-point {c.index} on segment; treated as below")
        return seq, notes

    def _height(self, f: int, a: np.ndarray, d: np.ndarray) -> float:
        c = np.asarray(self.packing.face_circles[f].center) - a
        return float((d[0] * c[1] - d[1] * c[0]) / np.linalg.norm(d))

    def _shared_edge(self, f: int, g: int) -> Edge:
        emb = self.packing.embedding
        df = emb.dart_face()
        for x, y in emb.graph.edges:
            if {df[(x, y)], df[(y, x)]} == {f, g}:
                return (x, y)
        raise PrecisionError(f"face disks {f},{g} touch but share no edge")

    def _contact_side(self, e: Edge, a: np.ndarray, d: np.ndarray, notes: List[str]) -> int:
        """+1 if the segment meets the region above the contact point of e, -1 for below.

        Around p_e the two face disks and the two vertex cusps alternate, so a
        line passing just beside p_e clips the region on the far side.  The
        gap it sees there shrinks quadratically, which is why the decision
        uses the height of p_e itself.  On the line counts as below.
        """
        q = np.asarray(self.packing.contact_points[e]) - a
        h = float(d[0] * q[1] - d[1] * q[0]) / float(np.linalg.norm(d))
        if abs(h) < self.threshold:
            notes.append(f"edge-point {e} on segment; region above taken")
            return 1
        return -1 if h > 0 else 1

    def _face_on_side(self, e: Edge, a: np.ndarray, d: np.ndarray, side: int) -> int:
        emb = self.packing.embedding
        df = emb.dart_face()
        cands = [f for f in (df[e], df[(e[1], e[0])]) if f != emb.outer_face]
        return max(cands, key=lambda f: side * self._height(f, a, d))


def _boundary_path(face: Sequence[int], a: int, b: int, ccw: bool) -> List[int]:
    """Walk the face cycle from a to b, in listed (counterclockwise) order or against it."""
    cyc = list(face) if ccw else list(reversed(face))
    i = cyc.index(a)
    cyc = cyc[i:] + cyc[:i]
    return cyc[:cyc.index(b) + 1]


def witness_from_packing(p: PrimalDualPacking, u: int, v: int,
                         notes: Optional[List[str]] = None) -> List[int]:
    """Strongly monotone u-v path read off the packing's partition.

    Between consecutive vertex regions of the segment the path follows the
    boundary of the face disk crossed in between: the upper boundary path if
    the face centre lies below the segment line (or on it), otherwise the
    lower one.  A vertex centre on the segment splits the pair.
    """
    if u == v:
        raise ValueError("pair endpoints must differ")
    if p.graph.has_edge(u, v):
        return [u, v]
    part = RegionPartition(p)
    a = np.asarray(p.center(u))
    d = np.asarray(p.center(v)) - a
    L = float(np.linalg.norm(d))
    for w in range(p.graph.n):
        if w in (u, v):
            continue
        rel = np.asarray(p.center(w)) - a
        t = float(rel @ d) / (L * L)
        h = float(d[0] * rel[1] - d[1] * rel[0]) / L
        if abs(h) < part.threshold and 0.0 < t < 1.0:
            if notes is not None:
                notes.append(f"vertex-point {w} on segment {u}-{v}")
            return witness_from_packing(p, u, w, notes)[:-1] + witness_from_packing(p, w, v, notes)
    seq, extra = part.sequence(u, v)
    if notes is not None:
        notes.extend(extra)
    faces = p.embedding.faces
    path = [u]
    current = u
    for i, c in enumerate(seq):
        if c.kind != "face":
            continue
        nxt = next(x.index for x in seq[i + 1:] if x.kind == "vertex")
        if nxt == current:
            continue
        below = part._height(c.index, a, d) < part.threshold
        # upper path runs clockwise around a counterclockwise face
        step = _boundary_path(faces[c.index].vertices, current, nxt, ccw=not below)
        path += step[1:]
        current = nxt
    if current != v:
        raise PrecisionError(f"region sequence for {u}-{v} ends at {current}")
    return path

"""JSON formats for graphs, drawings and packings, and SVG rendering.

Floats are written with 17 significant digits so that every double survives
a round trip bit for bit.  Graph JSON stores the rotation (if any) as edge
indices, counterclockwise around each vertex.
"""

from __future__ import annotations

import json
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from . import geometry as geo
from .errors import ValidationError
from .graph import Graph, PlaneEmbedding
from .packing import PrimalDualPacking
from .verify import Drawing

SVG_SIZE = 480.0
SVG_MARGIN = 16.0
VERTEX_MARK = 3.0


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def _dump(obj: Any, indent: int, level: int = 0) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValidationError(f"cannot serialise non-finite value {obj}")
        return format(obj, ".17g")
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        # short numeric rows stay on one line
        if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in obj):
            return "[" + ", ".join(_dump(x, indent) for x in obj) + "]"
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + _dump(x, indent, level + 1) for x in obj) + "\n" + end + "]"
    if hasattr(obj, "item"):          # numpy scalars
        return _dump(obj.item(), indent, level)
    raise ValidationError(f"cannot serialise {type(obj).__name__}")


def dumps(doc: Any) -> str:
    """Deterministic JSON text with 17-digit floats."""
    return _dump(doc, 2) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _require(doc: Any, key: str, kind, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ValidationError(f"{where}: missing field '{key}'")
    val = doc[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise ValidationError(f"{where}: field '{key}' has the wrong type")
    return val


def _point(val: Any, where: str) -> geo.Point:
    if (not isinstance(val, (list, tuple)) or len(val) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in val)):
        raise ValidationError(f"{where}: expected a pair of numbers")
    return (float(val[0]), float(val[1]))


def graph_to_json(g: Graph, emb: Optional[PlaneEmbedding] = None) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"n": g.n, "edges": [list(e) for e in g.edges]}
    if emb is not None:
        idx = g.edge_index()
        doc["rotation"] = [[idx[(min(v, u), max(v, u))] for u in emb.rotation[v]] for v in range(g.n)]
        doc["outer_face"] = emb.outer_face
    return doc


def graph_from_json(doc: Any) -> Tuple[Graph, Optional[PlaneEmbedding]]:
    n = _require(doc, "n", int, "graph")
    edges = _require(doc, "edges", list, "graph")
    if n < 0:
        raise ValidationError("graph: n must be non-negative")
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
            raise ValidationError(f"graph: edge {e!r} is not a pair of integers")
    g = Graph(n, tuple(tuple(e) for e in edges))
    rot = doc.get("rotation")
    if rot is None:
        return g, None
    if not isinstance(rot, list) or len(rot) != n:
        raise ValidationError("graph: rotation must have one list per vertex")
    rotation: List[List[int]] = []
    for v, row in enumerate(rot):
        if not isinstance(row, list):
            raise ValidationError(f"graph: rotation of vertex {v} is not a list")
        nbrs = []
        for i in row:
            if not isinstance(i, int) or not 0 <= i < g.m or v not in g.edges[i]:
                raise ValidationError(f"graph: rotation of vertex {v} names edge {i!r} not incident to it")
            a, b = g.edges[i]
            nbrs.append(b if a == v else a)
        rotation.append(nbrs)
    emb = PlaneEmbedding(g, rotation, int(doc.get("outer_face", 0)))
    if not 0 <= emb.outer_face < len(emb.faces):
        raise ValidationError(f"graph: outer face {emb.outer_face} does not exist")
    return g, emb


def drawing_to_json(d: Drawing) -> Dict[str, Any]:
    return {"graph": graph_to_json(d.graph), "pos": [list(p) for p in d.pos]}


def drawing_from_json(doc: Any) -> Drawing:
    g, _ = graph_from_json(_require(doc, "graph", dict, "drawing"))
    pos = _require(doc, "pos", list, "drawing")
    return Drawing(g, [_point(p, f"drawing: pos[{i}]") for i, p in enumerate(pos)])


def packing_to_json(p: PrimalDualPacking) -> Dict[str, Any]:
    faces = p.embedding.faces
    return {
        "graph": graph_to_json(p.graph, p.embedding),
        "vertex_circles": [{"center": list(c.center), "r": c.radius} for c in p.vertex_circles],
        "face_circles": [{"face": f, "vertices": list(faces[f].vertices), "center": list(c.center), "r": c.radius}
                         for f, c in sorted(p.face_circles.items())],
        "outer_circle": {"center": list(p.outer_circle.center), "r": p.outer_circle.radius},
        "contact_points": [{"edge": list(e), "point": list(pt)} for e, pt in sorted(p.contact_points.items())],
        "tol": p.tol,
        "residuals": {k: float(v) for k, v in p.residuals.items()},
    }


def _circle(doc: Any, where: str) -> geo.Circle:
    c = _point(_require(doc, "center", list, where), where)
    r = _require(doc, "r", (int, float), where)
    return geo.Circle(c, float(r))


def packing_from_json(doc: Any) -> PrimalDualPacking:
    g, emb = graph_from_json(_require(doc, "graph", dict, "packing"))
    if emb is None:
        raise ValidationError("packing: graph has no rotation")
    vc = [_circle(c, f"packing: vertex circle {i}") for i, c in enumerate(_require(doc, "vertex_circles", list, "packing"))]
    if len(vc) != g.n:
        raise ValidationError("packing: one vertex circle per vertex expected")
    fc = {}
    for item in _require(doc, "face_circles", list, "packing"):
        f = _require(item, "face", int, "packing: face circle")
        fc[f] = _circle(item, f"packing: face circle {f}")
    contacts = {}
    for item in _require(doc, "contact_points", list, "packing"):
        e = _require(item, "edge", list, "packing: contact point")
        contacts[(int(e[0]), int(e[1]))] = _point(item.get("point"), f"packing: contact point {e}")
    outer = _circle(_require(doc, "outer_circle", dict, "packing"), "packing: outer circle")
    tol = float(doc.get("tol", 0.0)) or None
    res = {k: float(v) for k, v in doc.get("residuals", {}).items()}
    kwargs = {"tol": tol} if tol is not None else {}
    return PrimalDualPacking(emb, vc, fc, outer, contacts, residuals=res, **kwargs)


def read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text)


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

def _num(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


class _Frame:
    """Maps drawing coordinates into the canvas, y pointing up."""

    def __init__(self, pts: Sequence[geo.Point]):
        if pts:
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            self.x0, self.y1 = min(xs), max(ys)
            span = max(max(xs) - self.x0, self.y1 - min(ys))
        else:
            self.x0 = self.y1 = 0.0
            span = 0.0
        self.s = (SVG_SIZE - 2 * SVG_MARGIN) / span if span > 0 else 1.0

    def xy(self, p: geo.Point) -> Tuple[str, str]:
        return _num(SVG_MARGIN + (p[0] - self.x0) * self.s), _num(SVG_MARGIN + (self.y1 - p[1]) * self.s)

    def len(self, r: float) -> str:
        return _num(r * self.s)


def _svg(body: List[str]) -> str:
    size = _num(SVG_SIZE)
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">')
    return "\n".join(['<?xml version="1.0" encoding="UTF-8"?>', head] + body + ["</svg>"]) + "\n"


def _edges_and_path(frame: _Frame, g: Graph, pos: Sequence[geo.Point], witness: Optional[Sequence[int]]) -> List[str]:
    out = ['<g class="edges" stroke="#333333" stroke-width="1">']
    for a, b in g.edges:
        (x1, y1), (x2, y2) = frame.xy(pos[a]), frame.xy(pos[b])
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    if witness:
        pts = " ".join(",".join(frame.xy(pos[v])) for v in witness)
        out.append(f'<polyline class="witness" points="{pts}" fill="none" stroke="#d62728" stroke-width="3"/>')
    return out


def svg_drawing(d: Drawing, witness: Optional[Sequence[int]] = None) -> str:
    frame = _Frame(d.pos)
    body = _edges_and_path(frame, d.graph, d.pos, witness)
    body.append('<g class="vertices" fill="#1f77b4">')
    for v, p in enumerate(d.pos):
        x, y = frame.xy(p)
        body.append(f'<circle id="v{v}" cx="{x}" cy="{y}" r="{_num(VERTEX_MARK)}"/>')
    body.append("</g>")
    return _svg(body)


def svg_packing(p: PrimalDualPacking, witness: Optional[Sequence[int]] = None) -> str:
    """Outer circle, face circles, vertex circles and the straight-line drawing on top."""
    oc = p.outer_circle
    frame = _Frame([geo.add(oc.center, (-oc.radius, -oc.radius)), geo.add(oc.center, (oc.radius, oc.radius))]
                   + [geo.add(c.center, (s * c.radius, s * c.radius)) for c in p.vertex_circles for s in (-1, 1)])

    def circle(ident: str, c: geo.Circle) -> str:
        x, y = frame.xy(c.center)
        return f'<circle id="{ident}" cx="{x}" cy="{y}" r="{frame.len(c.radius)}"/>'

    body = [f'<g class="outer" fill="none" stroke="#999999">{circle("o", oc)}</g>',
            '<g class="faces" fill="#ffdd99" fill-opacity="0.5" stroke="#cc8800">']
    body += [circle(f"f{f}", c) for f, c in sorted(p.face_circles.items())]
    body.append("</g>")
    body.append('<g class="vertex-circles" fill="#99ccff" fill-opacity="0.4" stroke="#1f77b4">')
    body += [circle(f"v{v}", c) for v, c in enumerate(p.vertex_circles)]
    body.append("</g>")
    body += _edges_and_path(frame, p.graph, [c.center for c in p.vertex_circles], witness)
    return _svg(body)


def svg_render(obj: Union[Drawing, PrimalDualPacking], witness: Optional[Sequence[int]] = None) -> str:
    if isinstance(obj, PrimalDualPacking):
        return svg_packing(obj, witness)
    return svg_drawing(obj, witness)
